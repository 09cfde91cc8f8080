#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "qfent/symbol.hpp"

namespace qfent {

/// Key-value symbol definition:
///
///   # comment
///   kind = cosine-thermal        # constant | cosine-thermal | fourier-table | grid
///   dimension = 1
///   beta = 2
///   mu = 0
///
/// fourier-table takes `coefficients = j re im; j re im; ...` (d indices per
/// entry) or `table = file.csv`; grid takes `samples = v0, v1, ...` and an
/// optional `grid_size` (samples per dimension). Unknown keys are rejected.
Symbol parse_symbol_config(const std::string& text, const std::filesystem::path& base_dir = {});
Symbol load_symbol_file(const std::filesystem::path& path);

/// CSV with header `j,re,im` (d = 1) or `j1,...,jd,re,im`.
FourierTable read_fourier_csv(std::istream& in, int dimension);
FourierTable read_fourier_csv(const std::filesystem::path& path, int dimension);
void write_fourier_csv(std::ostream& out, const FourierTable& table);

}  // namespace qfent
