#pragma once

#include "lgsp/calculus.hpp"
#include "lgsp/kernel.hpp"
#include "lgsp/learn.hpp"
#include "lgsp/product.hpp"
#include "lgsp/spectral.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace lgsp {

/// On-disk formats. Complex scalars are [re, im] pairs.
///   kernel   {"n": n, "taps": [{"t": t, "m": [[[re,im], ...] x n] x n}]}
///   signal   {"n": n, "start": t0, "samples": [[[re,im], ...] x n] x len}
///   phi      {"pieces": [{"region": "cluster:i" | {"disc": {"center":
///            [re,im], "radius": r}}, "family": f, "params": [...]}]}
///   dataset  {"pairs": [{"x": signal, "y": signal}]}
/// Parsers throw ParseError for unreadable or structurally bad input and
/// ValidationError for semantically bad values.

KernelSequence kernel_from_json(const std::string& text);
Signal signal_from_json(const std::string& text);
PhiSpec phi_from_json(const std::string& text);
Dataset dataset_from_json(const std::string& text);

KernelSequence load_kernel(const std::string& path);
Signal load_signal(const std::string& path);
PhiSpec load_phi(const std::string& path);
Dataset load_dataset(const std::string& path);

/// 17 significant digits, lowercase scientific; the one float format
/// used in every emitted file, so outputs are byte-stable.
std::string format_double(double v);

std::string kernel_to_json(const KernelSequence& k);
std::string signal_to_json(const Signal& x);
std::string phi_to_json(const PhiSpec& phi);
std::string dataset_to_json(const Dataset& d);
std::string regions_to_json(const RegionSet& r);
std::string fit_to_json(const FitResult& f, std::optional<std::uint64_t> seed);
std::string report_to_json(const ComparisonReport& r);

/// Header "omega,branch,re,im", one row per (grid point, branch).
std::string spectrum_to_csv(const SpectrumLocus& locus);

std::string read_file(const std::string& path);

/// Write via a temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace lgsp
