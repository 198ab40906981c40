#include "pmldd/config.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace pmldd {

std::string to_string(StretchKind k) {
  switch (k) {
    case StretchKind::SigmaM1:
      return "m1";
    case StretchKind::SigmaM2:
      return "m2";
    default:
      return "none";
  }
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

struct Entry {
  std::string value;
  int line;
};

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return parse_double(entries_.at(key).value, key);
  }
  long long integer(const std::string& key, long long fallback) const {
    if (!has(key)) return fallback;
    return parse_int(entries_.at(key).value, key);
  }
  std::string word(const std::string& key, const std::string& fallback) const {
    return has(key) ? entries_.at(key).value : fallback;
  }
  std::vector<double> numbers(const std::string& key) const {
    std::vector<double> out;
    for (const auto& s : split_list(entries_.at(key).value)) out.push_back(parse_double(s, key));
    return out;
  }
  std::vector<long long> integers(const std::string& key) const {
    std::vector<long long> out;
    for (const auto& s : split_list(entries_.at(key).value)) out.push_back(parse_int(s, key));
    return out;
  }
  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw Error("line " + std::to_string(entries_.at(key).line) + ": " + key + ": " + msg);
  }

 private:
  double parse_double(const std::string& s, const std::string& key) const {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) fail(key, "expected a number, got '" + s + "'");
    return v;
  }
  long long parse_int(const std::string& s, const std::string& key) const {
    long long v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) fail(key, "expected an integer, got '" + s + "'");
    return v;
  }

  std::map<std::string, Entry> entries_;
};

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"physics", {"frequency", "wave_speed", "eps_r_background", "conductivity"}},
      {"geometry", {"domain_lengths", "box_extents", "box_eps_r"}},
      {"discretization", {"n_lambda", "pml_wavelengths", "interface_pml_layers"}},
      {"decomposition", {"subdomains", "overlaps"}},
      {"method", {"global_bc", "interface_ic", "sigma", "sigma_m2_constant"}},
      {"solver", {"tol", "max_iter", "restart", "seed", "rhs", "polarization", "verify_direct_max_dofs",
                  "memory_budget_mb"}},
      {"output", {"csv", "fields", "field_format", "verbosity"}},
  };
  return s;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
std::string join(const T& values) {
  std::string out;
  for (const auto& v : values) {
    if (!out.empty()) out += ", ";
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(v)>>)
      out += fmt_double(v);
    else
      out += std::to_string(v);
  }
  return out;
}

}  // namespace

DiscretizationSpec ExperimentConfig::discretization(int overlap) const {
  DiscretizationSpec d;
  d.domain_lengths = domain_lengths;
  d.n_lambda = n_lambda;
  d.pml_wavelengths = global_bc == GlobalBc::Pml ? pml_wavelengths : 0.0;
  d.interface_pml_layers = interface_pml_layers;
  d.overlap_layers = overlap;
  return d;
}

void ExperimentConfig::validate() const {
  physics.validate();
  discretization(overlaps.empty() ? 1 : overlaps.front()).validate();
  if (overlaps.empty()) throw Error("overlaps: the overlap list must not be empty");
  for (int o : overlaps)
    if (o < 1) throw Error("overlaps: every overlap must be at least one layer");
  for (int p : subdomains)
    if (p < 1) throw Error("subdomains: counts must be positive");
  if (global_bc == GlobalBc::Pml && !(pml_wavelengths > 0.0))
    throw Error("pml_wavelengths: a PML global boundary needs a positive thickness");
  if (interface_ic == InterfaceCondition::Pml && interface_pml_layers < 1)
    throw Error(
        "interface_pml_layers: PML interface conditions need a PML of positive width (at least one layer) "
        "inside the overlap");
  if (!(tol > 0.0)) throw Error("tol: must be positive");
  if (max_iter < 1) throw Error("max_iter: must be at least 1");
  if (restart < 0) throw Error("restart: must be nonnegative");
  if (!(memory_budget_mb >= 0.0)) throw Error("memory_budget_mb: must be nonnegative");
  if (rhs == RhsKind::PlaneWave && polarization[2] != 0.0)
    throw Error("polarization: must be tangential to the z = 0 excitation face");
  if (rhs == RhsKind::PlaneWave && polarization[0] == 0.0 && polarization[1] == 0.0)
    throw Error("polarization: must be nonzero");
  for (const auto* path : {&csv_path, &fields_path}) {
    if (path->empty()) continue;
    const auto parent = std::filesystem::path(*path).parent_path();
    if (!parent.empty() && !std::filesystem::is_directory(parent))
      throw Error("output directory does not exist: " + parent.string());
  }
}

ExperimentConfig parse_config(const std::string& text) {
  std::map<std::string, Entry> entries;  // "section.key"
  std::istringstream in(text);
  std::string raw, section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(where + "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!schema().count(section)) throw Error(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(where + "expected 'key = value'");
    if (section.empty()) throw Error(where + "key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!schema().at(section).count(key)) throw Error(where + "unknown key '" + key + "' in [" + section + "]");
    if (value.empty()) throw Error(where + "empty value for '" + key + "'");
    if (!entries.emplace(key, Entry{value, line_no}).second) throw Error(where + "duplicate key '" + key + "'");
  }

  const Reader r(std::move(entries));
  ExperimentConfig c;
  for (const char* req : {"frequency", "domain_lengths", "n_lambda"})
    if (!r.has(req)) throw Error(std::string("missing required key '") + req + "'");

  c.physics.frequency = r.number("frequency", 0.0);
  c.physics.wave_speed = r.number("wave_speed", 1.0);
  c.physics.eps_r_background = r.number("eps_r_background", 1.0);
  c.physics.conductivity = r.number("conductivity", 0.0);

  const auto lengths = r.numbers("domain_lengths");
  if (lengths.size() != 3) r.fail("domain_lengths", "expected 3 values");
  c.domain_lengths = {lengths[0], lengths[1], lengths[2]};
  if (r.has("box_extents")) {
    const auto ext = r.numbers("box_extents");
    if (ext.size() != 6) r.fail("box_extents", "expected 6 values x0, x1, y0, y1, z0, z1");
    MaterialBox box;
    box.eps_r = r.number("box_eps_r", 1.0);
    for (int d = 0; d < 3; ++d) box.extents[d] = {ext[2 * d], ext[2 * d + 1]};
    c.box = box;
  } else if (r.has("box_eps_r")) {
    r.fail("box_eps_r", "given without box_extents");
  }

  c.n_lambda = r.number("n_lambda", 0.0);
  c.pml_wavelengths = r.number("pml_wavelengths", 2.0);
  c.interface_pml_layers = static_cast<int>(r.integer("interface_pml_layers", 0));

  if (r.has("subdomains")) {
    const auto p = r.integers("subdomains");
    if (p.size() != 3) r.fail("subdomains", "expected 3 values");
    c.subdomains = {static_cast<int>(p[0]), static_cast<int>(p[1]), static_cast<int>(p[2])};
  }
  if (r.has("overlaps")) {
    c.overlaps.clear();
    for (long long o : r.integers("overlaps")) c.overlaps.push_back(static_cast<int>(o));
  }

  const std::string bc = r.word("global_bc", "imp");
  if (bc != "imp" && bc != "pml") r.fail("global_bc", "expected imp or pml");
  c.global_bc = bc == "pml" ? GlobalBc::Pml : GlobalBc::Impedance;
  const std::string ic = r.word("interface_ic", "imp");
  if (ic != "imp" && ic != "pml") r.fail("interface_ic", "expected imp or pml");
  c.interface_ic = ic == "pml" ? InterfaceCondition::Pml : InterfaceCondition::Impedance;
  const std::string sg = r.word("sigma", "m2");
  if (sg != "m1" && sg != "m2") r.fail("sigma", "expected m1 or m2");
  c.sigma_kind = sg == "m1" ? StretchKind::SigmaM1 : StretchKind::SigmaM2;
  c.sigma_m2_constant = r.number("sigma_m2_constant", 2.0);

  c.tol = r.number("tol", 1e-6);
  c.max_iter = static_cast<int>(r.integer("max_iter", 200));
  c.restart = static_cast<int>(r.integer("restart", 0));
  const long long seed = r.integer("seed", 42);
  if (seed < 0) r.fail("seed", "must be nonnegative");
  c.seed = static_cast<std::uint64_t>(seed);
  const std::string rhs = r.word("rhs", "planewave");
  if (rhs != "planewave" && rhs != "random") r.fail("rhs", "expected planewave or random");
  c.rhs = rhs == "random" ? RhsKind::Random : RhsKind::PlaneWave;
  if (r.has("polarization")) {
    const auto p = r.numbers("polarization");
    if (p.size() != 3) r.fail("polarization", "expected 3 values");
    c.polarization = {p[0], p[1], p[2]};
  }
  c.verify_direct_max_dofs = static_cast<int>(r.integer("verify_direct_max_dofs", 20000));
  c.memory_budget_mb = r.number("memory_budget_mb", 0.0);

  c.csv_path = r.word("csv", "");
  c.fields_path = r.word("fields", "");
  const std::string ff = r.word("field_format", "vtk");
  if (ff != "vtk" && ff != "csv") r.fail("field_format", "expected vtk or csv");
  c.field_format = ff == "csv" ? FieldFormat::Csv : FieldFormat::Vtk;
  c.verbosity = static_cast<int>(r.integer("verbosity", 1));

  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

namespace {

std::string serialize_body(const ExperimentConfig& c, bool with_output) {
  std::ostringstream o;
  o << "[physics]\n"
    << "frequency = " << fmt_double(c.physics.frequency) << "\n"
    << "wave_speed = " << fmt_double(c.physics.wave_speed) << "\n"
    << "eps_r_background = " << fmt_double(c.physics.eps_r_background) << "\n"
    << "conductivity = " << fmt_double(c.physics.conductivity) << "\n\n";
  o << "[geometry]\n"
    << "domain_lengths = " << join(c.domain_lengths) << "\n";
  if (c.box) {
    std::vector<double> ext;
    for (const auto& iv : c.box->extents) ext.insert(ext.end(), iv.begin(), iv.end());
    o << "box_extents = " << join(ext) << "\n"
      << "box_eps_r = " << fmt_double(c.box->eps_r) << "\n";
  }
  o << "\n[discretization]\n"
    << "n_lambda = " << fmt_double(c.n_lambda) << "\n"
    << "pml_wavelengths = " << fmt_double(c.pml_wavelengths) << "\n"
    << "interface_pml_layers = " << c.interface_pml_layers << "\n\n";
  o << "[decomposition]\n"
    << "subdomains = " << join(c.subdomains) << "\n"
    << "overlaps = " << join(c.overlaps) << "\n\n";
  o << "[method]\n"
    << "global_bc = " << to_string(c.global_bc) << "\n"
    << "interface_ic = " << to_string(c.interface_ic) << "\n"
    << "sigma = " << to_string(c.sigma_kind) << "\n"
    << "sigma_m2_constant = " << fmt_double(c.sigma_m2_constant) << "\n\n";
  o << "[solver]\n"
    << "tol = " << fmt_double(c.tol) << "\n"
    << "max_iter = " << c.max_iter << "\n"
    << "restart = " << c.restart << "\n"
    << "seed = " << c.seed << "\n"
    << "rhs = " << (c.rhs == RhsKind::Random ? "random" : "planewave") << "\n"
    << "polarization = " << join(c.polarization) << "\n"
    << "verify_direct_max_dofs = " << c.verify_direct_max_dofs << "\n"
    << "memory_budget_mb = " << fmt_double(c.memory_budget_mb) << "\n";
  if (with_output) {
    o << "\n[output]\n";
    if (!c.csv_path.empty()) o << "csv = " << c.csv_path << "\n";
    if (!c.fields_path.empty()) o << "fields = " << c.fields_path << "\n";
    o << "field_format = " << (c.field_format == FieldFormat::Csv ? "csv" : "vtk") << "\n"
      << "verbosity = " << c.verbosity << "\n";
  }
  return o.str();
}

}  // namespace

std::string serialize_config(const ExperimentConfig& config) { return serialize_body(config, true); }

std::string config_fingerprint(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize_body(config, false)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace pmldd
