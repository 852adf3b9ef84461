#include "tvspec/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "tvspec/error.hpp"

namespace tvspec {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError("invalid number for '" + std::string(key) + "': '" + std::string(v) + "'");
  return out;
}

long parse_integer(std::string_view key, std::string_view v) {
  long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("invalid integer for '" + std::string(key) + "': '" + std::string(v) + "'");
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("invalid boolean for '" + std::string(key) + "': '" + std::string(v) + "'");
}

std::size_t parse_size(std::string_view key, std::string_view v) {
  const long n = parse_integer(key, v);
  if (n < 0) throw ConfigError("'" + std::string(key) + "' must be nonnegative");
  return static_cast<std::size_t>(n);
}

using Setter = std::function<void(EstimatorConfig&, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = [] {
    std::map<std::string, Setter, std::less<>> t;
    auto real = [&t](const char* name, double EstimatorConfig::*field) {
      t[name] = [field](EstimatorConfig& c, std::string_view k, std::string_view v) {
        c.*field = parse_double(k, v);
      };
    };
    real("b_t0", &EstimatorConfig::b_t0);
    real("b_f0", &EstimatorConfig::b_f0);
    real("gamma_t", &EstimatorConfig::gamma_t);
    real("gamma_f", &EstimatorConfig::gamma_f);
    real("rho", &EstimatorConfig::rho);
    real("eta", &EstimatorConfig::eta);
    real("q", &EstimatorConfig::q);
    real("b_star_t0", &EstimatorConfig::b_star_t0);
    real("b_star_f0", &EstimatorConfig::b_star_f0);
    real("b_sstar_t0", &EstimatorConfig::b_sstar_t0);
    real("b_sstar_f0", &EstimatorConfig::b_sstar_f0);
    real("p_pen", &EstimatorConfig::p_pen);
    real("p_mem", &EstimatorConfig::p_mem);
    real("c_pen", &EstimatorConfig::c_pen);
    real("c_mem", &EstimatorConfig::c_mem);
    real("penalty_scale", &EstimatorConfig::penalty_scale);
    real("bias_exponent", &EstimatorConfig::bias_exponent);
    t["k_hard"] = [](EstimatorConfig& c, std::string_view k, std::string_view v) {
      c.k_hard = static_cast<int>(parse_integer(k, v));
    };
    t["d_t"] = [](EstimatorConfig& c, std::string_view k, std::string_view v) { c.d_t = parse_size(k, v); };
    t["d_f"] = [](EstimatorConfig& c, std::string_view k, std::string_view v) { c.d_f = parse_size(k, v); };
    t["keep_history"] = [](EstimatorConfig& c, std::string_view k, std::string_view v) {
      c.keep_history = parse_bool(k, v);
    };
    return t;
  }();
  return table;
}

std::string format_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

const std::vector<std::string>& EstimatorConfig::keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, setter] : setters()) out.push_back(name);
    return out;
  }();
  return names;
}

EstimatorConfig EstimatorConfig::resolved(std::size_t T) const {
  EstimatorConfig c = *this;
  if (c.b_star_t0 == 0.0) c.b_star_t0 = c.b_t0;
  if (c.b_star_f0 == 0.0) c.b_star_f0 = c.b_f0;
  if (c.b_sstar_t0 == 0.0) c.b_sstar_t0 = c.b_t0;
  if (c.b_sstar_f0 == 0.0) c.b_sstar_f0 = c.b_f0;
  if (c.c_pen == 0.0) c.c_pen = 2.0 * chi2_quantile_1df(c.p_pen);
  if (c.c_mem == 0.0) c.c_mem = 2.0 * chi2_quantile_1df(c.p_mem);
  if (c.d_t == 0 || c.d_f == 0) {
    const EstimationGrid g = EstimationGrid::automatic(RawGrid{T});
    if (c.d_t == 0) c.d_t = g.d_t;
    if (c.d_f == 0) c.d_f = g.d_f;
  }
  return c;
}

void EstimatorConfig::validate() const {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ParameterError(msg);
  };
  require(b_t0 > 0.0 && b_t0 <= 1.0, "b_t0 must lie in (0, 1]");
  require(b_f0 > 0.0 && b_f0 <= kTwoPi, "b_f0 must lie in (0, 2 pi]");
  require(gamma_t >= 1.0 && gamma_f >= 1.0, "growth rates must be >= 1");
  require(rho >= 1.0, "rho must be >= 1");
  require(eta >= 0.0 && eta <= 1.0, "eta must lie in [0, 1]");
  require(q > 0.0 && q < 1.0, "q must lie in (0, 1)");
  require(b_star_t0 >= 0.0 && b_star_f0 >= 0.0 && b_sstar_t0 >= 0.0 && b_sstar_f0 >= 0.0,
          "denominator bandwidths must be nonnegative");
  require(p_pen > 0.0 && p_pen < 1.0 && p_mem > 0.0 && p_mem < 1.0, "p_pen and p_mem must lie in (0, 1)");
  require(c_pen >= 0.0 && c_mem >= 0.0, "cutoffs must be nonnegative (0 selects the default)");
  require(penalty_scale >= 0.0, "penalty_scale must be nonnegative");
  require(k_hard >= 1, "k_hard must be >= 1");
  require(bias_exponent < 0.0, "bias_exponent must be negative");
}

std::vector<std::string> EstimatorConfig::warnings(std::size_t T) const {
  std::vector<std::string> out;
  const double logT = std::log(static_cast<double>(T));
  if (b_t0 * b_f0 * static_cast<double>(T) < logT * logT)
    out.push_back("b_t0 * b_f0 * T is below log(T)^2; initial estimates may be unstable");
  const double g = gamma_t * gamma_f;
  if (g < 1.2 || g > 1.5) out.push_back("gamma_t * gamma_f outside the recommended range [1.2, 1.5]");
  if (rho < 1.01 || rho > 1.03) out.push_back("rho outside the recommended range [1.01, 1.03]");
  if (eta > 0.25) out.push_back("eta above the recommended maximum 0.25");
  if (q < 0.10 || q > 0.20) out.push_back("q outside the recommended range [0.10, 0.20]");
  return out;
}

KernelConstants EstimatorConfig::kernel_constants() const {
  KernelConstants k = default_kernel_constants();
  k.rho = rho;
  k.c_pen = c_pen > 0.0 ? c_pen : 2.0 * chi2_quantile_1df(p_pen);
  k.c_mem = c_mem > 0.0 ? c_mem : 2.0 * chi2_quantile_1df(p_mem);
  return k;
}

EstimationGrid EstimatorConfig::estimation_grid(const RawGrid& raw) const {
  EstimationGrid g = EstimationGrid::automatic(raw);
  if (d_t > 0) g.d_t = d_t;
  if (d_f > 0) g.d_f = d_f;
  if (g.d_t >= raw.n_time() || g.d_f >= raw.n_freq())
    throw ParameterError("decimation leaves fewer than two estimation points along an axis");
  return g;
}

EstimatorConfig EstimatorConfig::parse(std::string_view text) {
  EstimatorConfig c;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    std::string_view value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    const auto it = setters().find(key);
    if (it == setters().end())
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    if (!seen.insert(std::string(key)).second)
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + std::string(key) + "'");
    it->second(c, key, value);
  }
  return c;
}

EstimatorConfig EstimatorConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string EstimatorConfig::to_text() const {
  std::ostringstream os;
  os << "b_t0 = " << format_real(b_t0) << '\n'
     << "b_f0 = " << format_real(b_f0) << '\n'
     << "gamma_t = " << format_real(gamma_t) << '\n'
     << "gamma_f = " << format_real(gamma_f) << '\n'
     << "rho = " << format_real(rho) << '\n'
     << "eta = " << format_real(eta) << '\n'
     << "q = " << format_real(q) << '\n'
     << "b_star_t0 = " << format_real(b_star_t0) << '\n'
     << "b_star_f0 = " << format_real(b_star_f0) << '\n'
     << "b_sstar_t0 = " << format_real(b_sstar_t0) << '\n'
     << "b_sstar_f0 = " << format_real(b_sstar_f0) << '\n'
     << "p_pen = " << format_real(p_pen) << '\n'
     << "p_mem = " << format_real(p_mem) << '\n'
     << "c_pen = " << format_real(c_pen) << '\n'
     << "c_mem = " << format_real(c_mem) << '\n'
     << "penalty_scale = " << format_real(penalty_scale) << '\n'
     << "k_hard = " << k_hard << '\n'
     << "bias_exponent = " << format_real(bias_exponent) << '\n'
     << "d_t = " << d_t << '\n'
     << "d_f = " << d_f << '\n'
     << "keep_history = " << (keep_history ? "true" : "false") << '\n';
  return os.str();
}

}  // namespace tvspec
