#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "specnoise/chain.hpp"
#include "specnoise/noise.hpp"
#include "specnoise/spectral.hpp"

namespace specnoise {

// Default alpha grid: 25 log-spaced points from 1e-3 to 1e1 inclusive.
std::vector<double> default_alpha_grid();

// Chain spec: {"family": name, "params": {"n": .., "k": ..}} or
// {"states": [...], "generator": [[...]], "pi": [...]} with pi optional.
// When both generator and pi are given they must agree within 1e-9 and the
// provided pi wins.
Chain chain_from_json(const nlohmann::json& spec);
Chain load_chain(const std::string& path);

// Canonical explicit form (states, generator, pi, plus the family tag when
// known). Doubles serialize shortest-round-trip, so reload is bit-exact.
nlohmann::json chain_to_json(const Chain& chain);

// Function spec forms:
//   {"type": "indicator", "states": [labels...]}
//   {"type": "dictator", "coordinate": i}        (1-based label position)
//   {"type": "threshold", "band_k": k, "c": c}   (psi_1 direction)
//   {"type": "values", "values": [...]}
// The threshold form needs the decomposition; pass nullptr otherwise.
Observable function_from_json(const nlohmann::json& spec, const Chain& chain,
                              const SpectralDecomposition* dec);

nlohmann::json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Shortest-round-trip decimal form of a double, for CSV output.
std::string format_double(double x);

}  // namespace specnoise
