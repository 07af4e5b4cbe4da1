#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pumpshape/diffuser.hpp"
#include "pumpshape/shaper.hpp"
#include "pumpshape/spdc.hpp"

namespace pumpshape {

// CSV matrices carry full double precision (%.17g) so replayed runs are
// bitwise identical.
void write_csv_matrix(const std::filesystem::path& path, const std::vector<double>& values, int n);
std::vector<double> read_csv_matrix(const std::filesystem::path& path, int& n_out);

// 8-bit binary PGM preview, peak-normalized.
void write_pgm(const std::filesystem::path& path, const std::vector<double>& values, int n);

// Thickness map as CSV plus a JSON sidecar with everything needed for exact
// replay (n, pitch, n_index, corr_length, rms_height, seed).
void export_diffuser(const DiffuserMap& d, const std::filesystem::path& csv_path,
                     const std::filesystem::path& json_path);
DiffuserMap import_diffuser(const std::filesystem::path& csv_path, const std::filesystem::path& json_path);

// Coincidence map as CSV plus sidecar (q_i, wavelengths, normalization).
void export_coincidence(const CoincidenceMap& map, const std::filesystem::path& csv_path,
                        const std::filesystem::path& json_path, std::uint64_t seed);

// Optimization trace as JSON; the final mask goes to CSV separately.
void export_record(const OptimizationRecord& record, const std::filesystem::path& json_path);
void write_mask_csv(const PhaseMask& mask, const std::filesystem::path& path);

}  // namespace pumpshape
