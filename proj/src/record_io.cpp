#include "renorm/record_io.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "renorm/errors.hpp"

namespace renorm {

using nlohmann::json;

void RunConfig::validate() const {
  if (!(tol.newton > 0.0) || !(tol.cycle > 0.0) || !(tol.fd_step > 0.0)) {
    throw DomainError("tolerances must be positive");
  }
  if (degree < 16) throw DomainError("degree must be at least 16");
  if (!(alpha > 1.0)) throw DomainError("alpha must exceed 1");
  if (period < 2) throw DomainError("period must be at least 2");
  (void)sigma();
}

UnimodalPermutation RunConfig::sigma() const {
  if (sigma_name == "doubling") {
    if (period != 2) throw DomainError("sigma 'doubling' has period 2");
    return UnimodalPermutation::doubling();
  }
  if (sigma_name == "first") {
    const auto all = enumerate_unimodal_permutations(period);
    if (all.empty()) throw DomainError("no unimodal permutation of period " + std::to_string(period));
    return all.front();
  }
  std::vector<int> images;
  std::stringstream ss(sigma_name);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      images.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw DomainError("sigma '" + sigma_name + "' is neither a known name nor a list of integers");
    }
  }
  if (static_cast<int>(images.size()) != period) throw DomainError("sigma '" + sigma_name + "' does not have the given period");
  return UnimodalPermutation(std::move(images));
}

std::string default_output_dir() {
  const char* env = std::getenv("RENORM_OUTPUT_DIR");
  return env && *env ? std::string(env) : std::string(".");
}

namespace {

json config_json(const RunConfig& c) {
  return {{"alpha", c.alpha},
          {"period", c.period},
          {"sigma", c.sigma_name},
          {"degree", c.degree},
          {"tolerances", {{"newton", c.tol.newton}, {"cycle", c.tol.cycle}, {"fd_step", c.tol.fd_step}}}};
}

const json& field(const json& obj, const char* name, const std::string& path) {
  if (!obj.is_object() || !obj.contains(name)) throw SchemaError(path + name, "missing");
  return obj.at(name);
}

double number(const json& obj, const char* name, const std::string& path = "") {
  const auto& v = field(obj, name, path);
  if (!v.is_number()) throw SchemaError(path + name, "expected a number");
  return v.get<double>();
}

int integer(const json& obj, const char* name, const std::string& path = "") {
  const auto& v = field(obj, name, path);
  if (!v.is_number_integer()) throw SchemaError(path + name, "expected an integer");
  return v.get<int>();
}

}  // namespace

std::string record_to_json(const FixedPointRecord& r, const RunConfig& config, bool with_timestamp) {
  json doc;
  doc["alpha"] = r.alpha;
  doc["sigma"] = {{"period", r.sigma.period()}, {"images", r.sigma.images}};
  doc["degree"] = r.degree;
  doc["t_star"] = r.t_star;
  doc["coeffs"] = std::vector<double>(r.phi_star.coeffs().begin(), r.phi_star.coeffs().end());
  doc["residual"] = r.residual;
  json eig = json::array();
  if (r.spectral) {
    for (const auto& e : r.spectral->eigenvalues) eig.push_back({e.real(), e.imag()});
    doc["eigenvalue_stable"] = r.spectral->stable_flags;
    doc["delta"] = r.spectral->delta;
    doc["expanding_count"] = r.spectral->expanding_count;
  } else {
    doc["delta"] = nullptr;
    doc["expanding_count"] = nullptr;
  }
  doc["eigenvalues"] = eig;
  json prov = {{"version", kVersion}, {"config", config_json(config)}};
  if (with_timestamp) {
    prov["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(
                            std::chrono::system_clock::now().time_since_epoch())
                            .count();
  }
  doc["provenance"] = prov;
  return doc.dump(2) + "\n";
}

FixedPointRecord record_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("<document>", e.what());
  }
  if (!doc.is_object()) throw SchemaError("<document>", "expected an object");
  FixedPointRecord r;
  r.alpha = number(doc, "alpha");
  const auto& sigma = field(doc, "sigma", "");
  const int period = integer(sigma, "period", "sigma.");
  const auto& images = field(sigma, "images", "sigma.");
  if (!images.is_array() || static_cast<int>(images.size()) != period) {
    throw SchemaError("sigma.images", "expected an array of length sigma.period");
  }
  std::vector<int> im;
  for (const auto& v : images) {
    if (!v.is_number_integer()) throw SchemaError("sigma.images", "expected integers");
    im.push_back(v.get<int>());
  }
  try {
    r.sigma = UnimodalPermutation(std::move(im));
  } catch (const DomainError& e) {
    throw SchemaError("sigma.images", e.what());
  }
  r.degree = integer(doc, "degree");
  r.t_star = number(doc, "t_star");
  const auto& coeffs = field(doc, "coeffs", "");
  if (!coeffs.is_array() || static_cast<int>(coeffs.size()) != r.degree + 1) {
    throw SchemaError("coeffs", "expected an array of degree + 1 numbers");
  }
  std::vector<double> c;
  for (const auto& v : coeffs) {
    if (!v.is_number()) throw SchemaError("coeffs", "expected numbers");
    c.push_back(v.get<double>());
  }
  r.phi_star = PolyDiffeo::unchecked(ChebSeries(std::move(c)));
  r.residual = number(doc, "residual");
  const auto& eig = field(doc, "eigenvalues", "");
  if (!eig.is_array()) throw SchemaError("eigenvalues", "expected an array");
  const auto& delta = field(doc, "delta", "");
  const auto& count = field(doc, "expanding_count", "");
  if (!eig.empty()) {
    SpectralReport s;
    for (const auto& e : eig) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw SchemaError("eigenvalues", "expected [re, im] pairs");
      }
      s.eigenvalues.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    if (!delta.is_number()) throw SchemaError("delta", "expected a number");
    if (!count.is_number_integer()) throw SchemaError("expanding_count", "expected an integer");
    s.delta = delta.get<double>();
    s.expanding_count = count.get<int>();
    s.stable_flags.assign(s.eigenvalues.size(), true);
    if (doc.contains("eigenvalue_stable")) {
      const auto& flags = doc.at("eigenvalue_stable");
      if (!flags.is_array() || flags.size() != s.eigenvalues.size()) {
        throw SchemaError("eigenvalue_stable", "expected one boolean per eigenvalue");
      }
      for (std::size_t i = 0; i < flags.size(); ++i) {
        if (!flags[i].is_boolean()) throw SchemaError("eigenvalue_stable", "expected booleans");
        s.stable_flags[i] = flags[i].get<bool>();
      }
    }
    s.degree = r.degree;
    r.spectral = std::move(s);
  }
  const auto& prov = field(doc, "provenance", "");
  const auto& version = field(prov, "version", "provenance.");
  if (!version.is_string()) throw SchemaError("provenance.version", "expected a string");
  (void)field(prov, "config", "provenance.");
  return r;
}

void write_record(const std::string& path, const FixedPointRecord& record, const RunConfig& config) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  out << record_to_json(record, config);
}

FixedPointRecord read_record(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return record_from_json(ss.str());
}

}  // namespace renorm
