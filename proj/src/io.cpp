#include "twrelay/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace twr {
namespace {

std::vector<double> read_vector(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw ParameterError(std::string("missing array field '") + key + "'");
  }
  std::vector<double> v;
  for (const auto& x : j.at(key)) {
    if (!x.is_number()) throw ParameterError(std::string("non-numeric entry in '") + key + "'");
    v.push_back(x.get<double>());
  }
  return v;
}

}  // namespace

nlohmann::json csi_to_json(const ChannelState& csi) {
  nlohmann::json j;
  j["n"] = csi.size();
  j["g1"] = csi.g1;
  j["g2"] = csi.g2;
  j["gt1"] = csi.gt1;
  j["gt2"] = csi.gt2;
  return j;
}

ChannelState csi_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParameterError("channel file must hold a JSON object");
  ChannelState csi{read_vector(j, "g1"), read_vector(j, "g2"), read_vector(j, "gt1"),
                   read_vector(j, "gt2")};
  if (j.contains("n") && j.at("n").get<std::size_t>() != csi.size()) {
    throw ParameterError("field 'n' disagrees with the gain vectors");
  }
  csi.validate();
  return csi;
}

nlohmann::json alloc_to_json(const ResourceAllocation& a) {
  return {{"t", a.t}, {"p1", a.p1}, {"p2", a.p2}, {"pr", a.pr}};
}

ResourceAllocation alloc_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("t")) throw ParameterError("allocation needs field 't'");
  return {read_vector(j, "p1"), read_vector(j, "p2"), read_vector(j, "pr"),
          j.at("t").get<double>()};
}

SolverConfig config_from_json(const nlohmann::json& j, SolverConfig c) {
  if (!j.is_object()) throw ParameterError("solver config must be a JSON object");
  for (const auto& [key, val] : j.items()) {
    if (key == "eps_dual") c.eps_dual = val.get<double>();
    else if (key == "eps_bisect") c.eps_bisect = val.get<double>();
    else if (key == "max_iters") c.max_iters = val.get<int>();
    else if (key == "eps_feas") c.eps_feas = val.get<double>();
    else if (key == "degeneracy_tol") c.degeneracy_tol = val.get<double>();
    else if (key == "alpha3_rel_tol") c.alpha3_rel_tol = val.get<double>();
    else if (key == "t_margin") c.t_margin = val.get<double>();
    else if (key == "t_tol") c.t_tol = val.get<double>();
    else throw ParameterError("unknown solver config key '" + key + "'");
  }
  c.validate();
  return c;
}

nlohmann::json config_to_json(const SolverConfig& c) {
  return {{"eps_dual", c.eps_dual},         {"eps_bisect", c.eps_bisect},
          {"max_iters", c.max_iters},       {"eps_feas", c.eps_feas},
          {"degeneracy_tol", c.degeneracy_tol}, {"alpha3_rel_tol", c.alpha3_rel_tol},
          {"t_margin", c.t_margin},         {"t_tol", c.t_tol}};
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string csi_digest(const ChannelState& csi) { return fnv1a_hex(csi_to_json(csi).dump()); }

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string region_csv(const std::vector<const RegionBoundary*>& regions) {
  std::string out = "rho,r12,r21,t_star,strategy\n";
  for (const RegionBoundary* r : regions) {
    for (const auto& p : r->points) {
      out += format_number(p.rho) + ',' + format_number(p.rate.r12) + ',' +
             format_number(p.rate.r21) + ',' + format_number(p.t_star) + ',' +
             std::string(to_string(p.strategy)) + '\n';
    }
  }
  return out;
}

nlohmann::json region_json(const RegionBoundary& region) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : region.points) {
    pts.push_back({{"rho", p.rho},
                   {"r12", p.rate.r12},
                   {"r21", p.rate.r21},
                   {"t_star", p.t_star},
                   {"alloc", alloc_to_json(p.alloc)}});
  }
  nlohmann::json fails = nlohmann::json::array();
  for (const auto& f : region.failures) fails.push_back({{"rho", f.rho}, {"error", f.message}});
  return {{"strategy", std::string(to_string(region.strategy))},
          {"csi_digest", region.csi_digest},
          {"budget", {{"p1", region.budget.p1}, {"p2", region.budget.p2}, {"pr", region.budget.pr}}},
          {"points", pts},
          {"failures", fails}};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

nlohmann::json read_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

ChannelState read_csi_file(const std::string& path) { return csi_from_json(read_json_file(path)); }

void write_csi_file(const std::string& path, const ChannelState& csi) {
  write_json_file(path, csi_to_json(csi));
}

}  // namespace twr
