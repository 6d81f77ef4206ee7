#include "specnoise/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "specnoise/errors.hpp"
#include "specnoise/stability.hpp"

namespace specnoise {

namespace {

constexpr double kPiAgreementTol = 1e-9;

[[noreturn]] void schema_error(const std::string& what) {
  fail("SpecSchemaError", what);
}

}  // namespace

std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  grid.reserve(25);
  for (int i = 0; i < 25; ++i)
    grid.push_back(std::pow(10.0, -3.0 + 4.0 * i / 24.0));
  return grid;
}

Chain chain_from_json(const nlohmann::json& spec) {
  if (!spec.is_object()) schema_error("chain spec must be a JSON object");

  if (spec.contains("family")) {
    FamilySpec fam;
    fam.family = family_from_name(spec.at("family").get<std::string>());
    if (!spec.contains("params") || !spec.at("params").is_object())
      schema_error("family chain spec needs a params object");
    const auto& params = spec.at("params");
    if (!params.contains("n")) schema_error("params.n is required");
    fam.n = params.at("n").get<int>();
    if (params.contains("k")) fam.k = params.at("k").get<int>();
    return make_family(fam);
  }

  if (!spec.contains("states") || !spec.contains("generator"))
    schema_error("chain spec needs either family or states+generator");

  Chain chain;
  chain.states = spec.at("states").get<std::vector<std::string>>();
  const int n = chain.size();
  if (n < 2) schema_error("chain needs at least 2 states");

  const auto& rows = spec.at("generator");
  if (!rows.is_array() || static_cast<int>(rows.size()) != n)
    schema_error("generator must be an n x n array");
  chain.generator.resize(n, n);
  for (int i = 0; i < n; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != n)
      schema_error("generator must be an n x n array");
    for (int j = 0; j < n; ++j)
      chain.generator(i, j) = rows[i][j].get<double>();
  }

  if (spec.contains("pi")) {
    auto pi = spec.at("pi").get<std::vector<double>>();
    if (static_cast<int>(pi.size()) != n)
      schema_error("pi must have one entry per state");
    chain.pi = Eigen::Map<Eigen::VectorXd>(pi.data(), n);
    Eigen::VectorXd computed = stationary_from_generator(chain.generator);
    double disagreement = (chain.pi - computed).cwiseAbs().maxCoeff();
    if (disagreement > kPiAgreementTol)
      fail("ValidationFailed",
           "provided pi disagrees with the generator's stationary "
           "distribution by " +
               std::to_string(disagreement));
  } else {
    chain.pi = stationary_from_generator(chain.generator);
  }

  if (spec.contains("transitive"))
    chain.transitive = spec.at("transitive").get<bool>();
  return chain;
}

Chain load_chain(const std::string& path) {
  return chain_from_json(load_json_file(path));
}

nlohmann::json chain_to_json(const Chain& chain) {
  nlohmann::json spec;
  spec["states"] = chain.states;
  const int n = chain.size();
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < n; ++j) row.push_back(chain.generator(i, j));
    rows.push_back(std::move(row));
  }
  spec["generator"] = std::move(rows);
  nlohmann::json pi = nlohmann::json::array();
  for (int i = 0; i < n; ++i) pi.push_back(chain.pi(i));
  spec["pi"] = std::move(pi);
  if (chain.transitive) spec["transitive"] = true;
  if (chain.family) {
    spec["family_tag"] = family_name(chain.family->family);
    spec["family_params"] = {{"n", chain.family->n}, {"k", chain.family->k}};
  }
  return spec;
}

Observable function_from_json(const nlohmann::json& spec, const Chain& chain,
                              const SpectralDecomposition* dec) {
  if (!spec.is_object() || !spec.contains("type"))
    schema_error("function spec needs a type field");
  const std::string type = spec.at("type").get<std::string>();
  const int n = chain.size();

  if (type == "indicator") {
    std::vector<int> subset;
    for (const auto& label : spec.at("states")) {
      int idx = chain.index_of(label.get<std::string>());
      if (idx < 0)
        fail("UnknownState",
             "state " + label.get<std::string>() + " is not in the chain");
      subset.push_back(idx);
    }
    return Observable::indicator(subset, n);
  }

  if (type == "dictator") {
    int coord = spec.at("coordinate").get<int>();
    std::size_t width = chain.states.front().size();
    for (const auto& s : chain.states)
      if (s.size() != width ||
          s.find_first_not_of("01") != std::string::npos)
        fail("InvalidParams",
             "dictator needs equal-length bitstring state labels");
    if (coord < 1 || coord > static_cast<int>(width))
      fail("InvalidParams", "dictator coordinate out of range");
    Eigen::VectorXd values(n);
    for (int i = 0; i < n; ++i)
      values(i) = chain.states[i][coord - 1] == '1' ? 1.0 : 0.0;
    return Observable::from_values(std::move(values));
  }

  if (type == "threshold") {
    if (dec == nullptr)
      fail("InvalidParams", "threshold functions need a decomposition");
    double band_k = spec.at("band_k").get<double>();
    double c = spec.at("c").get<double>();
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(
        static_cast<int>(band_subspace(*dec, band_k).size()));
    e1(0) = 1.0;
    return make_threshold_function(*dec, band_k, e1, c).indicator;
  }

  if (type == "values") {
    auto values = spec.at("values").get<std::vector<double>>();
    if (static_cast<int>(values.size()) != n)
      schema_error("values must have one entry per state");
    return Observable::from_values(
        Eigen::Map<Eigen::VectorXd>(values.data(), n));
  }

  schema_error("unknown function type: " + type);
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("SpecParseError", "cannot open " + path);
  nlohmann::json parsed;
  try {
    in >> parsed;
  } catch (const nlohmann::json::exception& e) {
    fail("SpecParseError", "cannot parse " + path + ": " + e.what());
  }
  return parsed;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail("InvalidParams", "cannot open " + path + " for writing");
  out << text;
  if (!out) fail("InvalidParams", "failed writing " + path);
}

std::string format_double(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  // Trim to the shortest representation that round-trips.
  for (int precision = 1; precision <= 16; ++precision) {
    char shorter[32];
    std::snprintf(shorter, sizeof(shorter), "%.*g", precision, x);
    if (std::strtod(shorter, nullptr) == x) return shorter;
  }
  return buffer;
}

}  // namespace specnoise
