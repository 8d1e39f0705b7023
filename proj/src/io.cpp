#include "ckm/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ckm {
namespace {

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; big-endian hosts are unsupported");
static_assert(sizeof(double) == 8 && std::numeric_limits<double>::is_iec559);

constexpr std::uint32_t kFormatVersion = 1;

void write_bytes(std::ostream& out, const void* data, std::size_t size) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
}

template <typename T>
void write_pod(std::ostream& out, T value) {
  write_bytes(out, &value, sizeof(T));
}

void read_bytes(std::istream& in, void* data, std::size_t size) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(size));
  if (!in) throw std::runtime_error("truncated file");
}

template <typename T>
T read_pod(std::istream& in) {
  T value;
  read_bytes(in, &value, sizeof(T));
  return value;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  return in;
}

void expect_magic(std::istream& in, const char (&magic)[5], const char* what) {
  char got[4];
  read_bytes(in, got, 4);
  if (std::memcmp(got, magic, 4) != 0) {
    throw std::runtime_error(std::string("bad magic, not a ") + what + " file");
  }
  const auto version = read_pod<std::uint32_t>(in);
  if (version != kFormatVersion) {
    throw std::runtime_error("unsupported format version " + std::to_string(version));
  }
}

void write_matrix(std::ostream& out, const Matrix& mat) {
  write_bytes(out, mat.data(), sizeof(double) * static_cast<std::size_t>(mat.size()));
}

void read_matrix(std::istream& in, Matrix& mat) {
  read_bytes(in, mat.data(), sizeof(double) * static_cast<std::size_t>(mat.size()));
}

}  // namespace

void write_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  auto out = open_out(path);
  write_bytes(out, "CKMD", 4);
  write_pod(out, kFormatVersion);
  write_pod(out, static_cast<std::uint64_t>(dataset.size()));
  write_pod(out, static_cast<std::uint32_t>(dataset.dim()));
  write_matrix(out, dataset.points);
  write_pod(out, static_cast<std::uint8_t>(dataset.has_labels() ? 1 : 0));
  if (dataset.has_labels()) {
    write_bytes(out, dataset.labels.data(),
                sizeof(std::uint32_t) * dataset.labels.size());
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Dataset read_dataset(const std::filesystem::path& path) {
  auto in = open_in(path);
  expect_magic(in, "CKMD", "dataset");
  const auto n_points = read_pod<std::uint64_t>(in);
  const auto dim = read_pod<std::uint32_t>(in);
  if (n_points == 0 || dim == 0) throw std::runtime_error("empty dataset");
  Matrix points(static_cast<Index>(n_points), static_cast<Index>(dim));
  read_matrix(in, points);
  std::vector<std::uint32_t> labels;
  if (read_pod<std::uint8_t>(in) != 0) {
    labels.resize(n_points);
    read_bytes(in, labels.data(), sizeof(std::uint32_t) * labels.size());
  }
  return validate_dataset(std::move(points), std::move(labels));
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& dataset) {
  auto out = open_out(path);
  out << std::setprecision(17);
  for (Index i = 0; i < dataset.size(); ++i) {
    for (Index j = 0; j < dataset.dim(); ++j) {
      if (j > 0) out << ',';
      out << dataset.points(i, j);
    }
    if (dataset.has_labels()) out << ',' << dataset.labels[static_cast<std::size_t>(i)];
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Dataset read_dataset_csv(const std::filesystem::path& path, bool has_labels) {
  auto in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::vector<std::uint32_t> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error("malformed CSV cell: '" + cell + "'");
      }
    }
    if (has_labels) {
      if (row.size() < 2) throw std::runtime_error("CSV row too short for a label column");
      const double label = row.back();
      row.pop_back();
      if (label < 0 || label != static_cast<double>(static_cast<std::uint32_t>(label))) {
        throw std::runtime_error("CSV label column is not a non-negative integer");
      }
      labels.push_back(static_cast<std::uint32_t>(label));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error("inconsistent CSV row width");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("empty dataset");
  Matrix points(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < points.rows(); ++i) {
    for (Index j = 0; j < points.cols(); ++j) {
      points(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return validate_dataset(std::move(points), std::move(labels));
}

Dataset load_dataset(const std::filesystem::path& path, bool csv_has_labels) {
  {
    auto in = open_in(path);
    char magic[4] = {};
    in.read(magic, 4);
    if (in && std::memcmp(magic, "CKMD", 4) == 0) {
      return read_dataset(path);
    }
  }
  return read_dataset_csv(path, csv_has_labels);
}

void write_sketch(const std::filesystem::path& path, const Sketch& sketch) {
  auto out = open_out(path);
  write_bytes(out, "CKMS", 4);
  write_pod(out, kFormatVersion);
  write_pod(out, static_cast<std::uint32_t>(sketch.values.size()));
  write_pod(out, static_cast<std::uint32_t>(sketch.freq.dim()));
  write_pod(out, static_cast<std::uint64_t>(sketch.count));
  write_pod(out, static_cast<std::uint8_t>(sketch.freq.spec.distribution));
  write_pod(out, sketch.freq.spec.sigma2);
  write_pod(out, sketch.freq.spec.seed);
  write_matrix(out, sketch.freq.W);
  write_bytes(out, sketch.bounds.lower.data(),
              sizeof(double) * static_cast<std::size_t>(sketch.bounds.lower.size()));
  write_bytes(out, sketch.bounds.upper.data(),
              sizeof(double) * static_cast<std::size_t>(sketch.bounds.upper.size()));
  write_bytes(out, sketch.values.data(),
              sizeof(std::complex<double>) * static_cast<std::size_t>(sketch.values.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Sketch read_sketch(const std::filesystem::path& path) {
  auto in = open_in(path);
  expect_magic(in, "CKMS", "sketch");
  const auto m = read_pod<std::uint32_t>(in);
  const auto dim = read_pod<std::uint32_t>(in);
  const auto count = read_pod<std::uint64_t>(in);
  if (m == 0 || dim == 0) throw std::runtime_error("sketch has empty shape");
  if (count == 0) throw std::runtime_error("sketch has zero point count");

  Sketch sketch;
  const auto tag = read_pod<std::uint8_t>(in);
  if (tag > 1) throw std::runtime_error("unknown frequency distribution tag");
  sketch.freq.spec.distribution = static_cast<FreqDistribution>(tag);
  sketch.freq.spec.sigma2 = read_pod<double>(in);
  sketch.freq.spec.seed = read_pod<std::uint64_t>(in);
  if (!(sketch.freq.spec.sigma2 > 0)) throw std::runtime_error("sketch sigma2 must be positive");

  sketch.freq.W.resize(static_cast<Index>(m), static_cast<Index>(dim));
  read_matrix(in, sketch.freq.W);
  sketch.bounds.lower.resize(static_cast<Index>(dim));
  sketch.bounds.upper.resize(static_cast<Index>(dim));
  read_bytes(in, sketch.bounds.lower.data(), sizeof(double) * dim);
  read_bytes(in, sketch.bounds.upper.data(), sizeof(double) * dim);
  sketch.count = count;
  sketch.values.resize(static_cast<Index>(m));
  read_bytes(in, sketch.values.data(), sizeof(std::complex<double>) * m);

  if (!sketch.freq.W.allFinite()) throw std::runtime_error("sketch frequencies are not finite");
  if ((sketch.bounds.lower.array() > sketch.bounds.upper.array()).any()) {
    throw std::runtime_error("sketch bounds are inverted");
  }
  for (Index j = 0; j < sketch.values.size(); ++j) {
    if (std::abs(sketch.values[j]) > 1.0 + 1e-9) {
      throw std::runtime_error("sketch entry modulus exceeds 1");
    }
  }
  return sketch;
}

void write_model(const std::filesystem::path& path, const CentroidModel& model) {
  auto out = open_out(path);
  write_bytes(out, "CKMC", 4);
  write_pod(out, kFormatVersion);
  write_pod(out, static_cast<std::uint32_t>(model.k()));
  write_pod(out, static_cast<std::uint32_t>(model.dim()));
  write_matrix(out, model.centroids);
  write_bytes(out, model.weights.data(),
              sizeof(double) * static_cast<std::size_t>(model.weights.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

CentroidModel read_model(const std::filesystem::path& path) {
  auto in = open_in(path);
  expect_magic(in, "CKMC", "centroid");
  const auto k = read_pod<std::uint32_t>(in);
  const auto dim = read_pod<std::uint32_t>(in);
  if (k == 0 || dim == 0) throw std::runtime_error("centroid file has empty shape");
  CentroidModel model;
  model.centroids.resize(static_cast<Index>(k), static_cast<Index>(dim));
  read_matrix(in, model.centroids);
  model.weights.resize(static_cast<Index>(k));
  read_bytes(in, model.weights.data(), sizeof(double) * k);
  if (!model.centroids.allFinite() || !model.weights.allFinite()) {
    throw std::runtime_error("centroid file contains non-finite values");
  }
  if ((model.weights.array() < 0).any()) {
    throw std::runtime_error("centroid weights must be non-negative");
  }
  return model;
}

void write_model_csv(const std::filesystem::path& path, const CentroidModel& model) {
  auto out = open_out(path);
  out << std::setprecision(17);
  for (Index i = 0; i < model.k(); ++i) {
    for (Index j = 0; j < model.dim(); ++j) out << model.centroids(i, j) << ',';
    out << model.weights[i] << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace ckm
