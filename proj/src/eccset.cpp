#include "qsopt/eccset.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace qsopt {

using ordered_json = nlohmann::ordered_json;

static std::string hash_hex(uint64_t h) {
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return buf;
}

std::string eccs_to_string(const EccSet& es) {
  ordered_json j;
  j["format"] = "qsopt-eccs";
  j["version"] = 1;
  j["gateset"] = {{"name", es.gs->name}, {"hash", hash_hex(gate_set_hash(*es.gs))}};
  j["n"] = es.n;
  j["q"] = es.q;
  j["m"] = es.m;
  j["sigma_single_use"] = es.sigma_single_use;
  j["seed"] = es.seed;
  j["e_max"] = es.e_max;
  size_t xforms = 0;
  for (const auto& e : es.eccs) xforms += 2 * (e.circuits.size() - 1);
  j["counts"] = {{"eccs", es.eccs.size()},
                 {"circuits", es.circuit_count()},
                 {"transformations", xforms}};
  ordered_json arr = ordered_json::array();
  for (const auto& e : es.eccs) {
    ordered_json je;
    je["q"] = e.q;
    je["m"] = e.m;
    ordered_json circs = ordered_json::array();
    for (const auto& c : e.circuits) circs.push_back(circuit_text(c));
    je["circuits"] = circs;
    arr.push_back(je);
  }
  j["eccs"] = arr;
  return j.dump(2) + "\n";
}

void save_eccs(const EccSet& es, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << eccs_to_string(es);
}

EccSet load_eccs(const std::string& path, std::shared_ptr<const GateSet> gs) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& ex) {
    throw std::runtime_error(path + ": malformed JSON: " + ex.what());
  }
  if (j.value("format", "") != "qsopt-eccs")
    throw std::runtime_error(path + ": not an ECC set file");
  if (j.value("version", 0) != 1)
    throw std::runtime_error(path + ": unsupported version");

  EccSet es;
  std::string gs_name = j.at("gateset").at("name").get<std::string>();
  if (gs) {
    es.gs = gs;
  } else {
    es.gs = std::make_shared<GateSet>(builtin_gate_set(gs_name));
  }
  std::string want = j.at("gateset").at("hash").get<std::string>();
  if (hash_hex(gate_set_hash(*es.gs)) != want)
    throw std::runtime_error(path + ": gate set mismatch (hash " + want +
                             " vs active " + hash_hex(gate_set_hash(*es.gs)) +
                             ")");
  es.n = j.at("n").get<int>();
  es.q = j.at("q").get<int>();
  es.m = j.at("m").get<int>();
  es.sigma_single_use = j.value("sigma_single_use", true);
  es.seed = j.at("seed").get<uint64_t>();
  es.e_max = j.at("e_max").get<double>();

  for (const auto& je : j.at("eccs")) {
    Ecc e;
    e.q = je.at("q").get<int>();
    e.m = je.at("m").get<int>();
    for (const auto& jc : je.at("circuits"))
      e.circuits.push_back(
          parse_circuit_text(jc.get<std::string>(), es.gs, e.q, e.m));
    if (e.circuits.empty())
      throw std::runtime_error(path + ": empty equivalence class");
    es.eccs.push_back(std::move(e));
  }

  const auto& counts = j.at("counts");
  size_t xforms = 0;
  for (const auto& e : es.eccs) xforms += 2 * (e.circuits.size() - 1);
  if (counts.at("eccs").get<size_t>() != es.eccs.size() ||
      counts.at("circuits").get<size_t>() != es.circuit_count() ||
      counts.at("transformations").get<size_t>() != xforms)
    throw std::runtime_error(path + ": header counts disagree with body");
  return es;
}

}  // namespace qsopt
