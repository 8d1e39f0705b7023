#pragma once

#include <filesystem>

#include "ckm/types.hpp"

namespace ckm {

// Binary dataset format ("CKMD"): magic, version u32, N u64, n u32, then
// N*n little-endian f64 row-major, then a u8 label flag followed, when set,
// by N u32 labels.
void write_dataset(const std::filesystem::path& path, const Dataset& dataset);
Dataset read_dataset(const std::filesystem::path& path);

// CSV: one point per row, optionally a final integer label column.
void write_dataset_csv(const std::filesystem::path& path, const Dataset& dataset);
Dataset read_dataset_csv(const std::filesystem::path& path, bool has_labels = false);

// Reads either format, dispatching on the magic bytes.
Dataset load_dataset(const std::filesystem::path& path, bool csv_has_labels = false);

// Binary sketch format ("CKMS"): magic, version u32, m u32, n u32, N u64,
// the frequency spec (tag u8, sigma2 f64, seed u64), the full W matrix
// row-major, bounds l then u, then m (re, im) pairs. W is stored explicitly
// so a decoder never has to reproduce the sampling PRNG.
void write_sketch(const std::filesystem::path& path, const Sketch& sketch);
Sketch read_sketch(const std::filesystem::path& path);

// Binary centroid format ("CKMC"): magic, version u32, K u32, n u32,
// centroids row-major, then weights.
void write_model(const std::filesystem::path& path, const CentroidModel& model);
CentroidModel read_model(const std::filesystem::path& path);
void write_model_csv(const std::filesystem::path& path, const CentroidModel& model);

}  // namespace ckm
