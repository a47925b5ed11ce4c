#include "rkctl/tableau.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "rkctl/errors.hpp"
#include "rkctl/version.hpp"

#ifndef RKCTL_TABLEAU_DIR
#define RKCTL_TABLEAU_DIR "data/tableaux"
#endif
#ifndef RKCTL_VERSION
#define RKCTL_VERSION "0.0.0"
#endif

namespace rkctl {

const char* version() noexcept { return RKCTL_VERSION; }

ButcherTableau ButcherTableau::create(std::string name,
                                      const std::vector<std::vector<double>>& a,
                                      std::vector<double> b,
                                      std::vector<double> b_hat,
                                      std::vector<double> c, int order_q,
                                      int order_q_hat) {
  const auto s = b.size();
  if (s == 0) throw ContractViolation(name + ": tableau needs at least one stage");
  if (a.size() != s || c.size() != s)
    throw ContractViolation(name + ": A, b and c sizes disagree");
  if (b_hat.size() == s) b_hat.push_back(0.0);
  if (b_hat.size() != s + 1)
    throw ContractViolation(name + ": bhat must have s or s+1 entries");
  if (order_q < 1) throw ContractViolation(name + ": order must be >= 1");

  ButcherTableau t;
  t.name_ = std::move(name);
  t.stages_ = static_cast<int>(s);
  t.a_.assign(s * s, 0.0);
  for (std::size_t i = 0; i < s; ++i) {
    if (a[i].size() != s)
      throw ContractViolation(t.name_ + ": A must be square");
    for (std::size_t j = 0; j < s; ++j) {
      if (j >= i && a[i][j] != 0.0)
        throw ContractViolation(t.name_ + ": A is not strictly lower triangular");
      t.a_[i * s + j] = a[i][j];
    }
  }
  t.b_ = std::move(b);
  t.b_hat_ = std::move(b_hat);
  t.c_ = std::move(c);
  t.order_q_ = order_q;
  t.order_q_hat_ = order_q_hat;
  t.fsal_ = std::abs(t.b_hat_.back()) > 0.0;
  return t;
}

namespace {

ButcherTableau make_bs3() {
  return ButcherTableau::create(
      "BS3_3F",
      {{0.0, 0.0, 0.0}, {1.0 / 2.0, 0.0, 0.0}, {0.0, 3.0 / 4.0, 0.0}},
      {2.0 / 9.0, 1.0 / 3.0, 4.0 / 9.0},
      {7.0 / 24.0, 1.0 / 4.0, 1.0 / 3.0, 1.0 / 8.0}, {0.0, 1.0 / 2.0, 3.0 / 4.0},
      3, 2);
}

// Kraaijevanger's SSP(4,3) in Butcher form. Stage values of the Shu-Osher
// form are u1 = u + dt/2 f(u), u2 = u1 + dt/2 f(u1),
// u3 = 2/3 u + 1/3 (u2 + dt/2 f(u2)); the embedded solution is
// 1/3 u + 2/3 (u2 + dt/2 f(u2)).
ButcherTableau make_ssp43() {
  return ButcherTableau::create(
      "SSP3_4",
      {{0.0, 0.0, 0.0, 0.0},
       {1.0 / 2.0, 0.0, 0.0, 0.0},
       {1.0 / 2.0, 1.0 / 2.0, 0.0, 0.0},
       {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0, 0.0}},
      {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 2.0},
      {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0, 0.0},
      {0.0, 1.0 / 2.0, 1.0, 1.0 / 2.0}, 3, 2);
}

OrderResiduals residuals(const std::vector<double>& w,
                         const std::vector<double>& a, const std::vector<double>& c) {
  const auto n = w.size();
  auto A = [&](std::size_t i, std::size_t j) { return a[i * n + j]; };
  std::vector<double> ac(n, 0.0), ac2(n, 0.0), aac(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      ac[i] += A(i, j) * c[j];
      ac2[i] += A(i, j) * c[j] * c[j];
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) aac[i] += A(i, j) * ac[j];

  OrderResiduals r{};
  r.fill(0.0);
  const double targets[8] = {1.0,        1.0 / 2.0, 1.0 / 3.0,  1.0 / 6.0,
                             1.0 / 4.0,  1.0 / 8.0, 1.0 / 12.0, 1.0 / 24.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double ci = c[i];
    r[0] += w[i];
    r[1] += w[i] * ci;
    r[2] += w[i] * ci * ci;
    r[3] += w[i] * ac[i];
    r[4] += w[i] * ci * ci * ci;
    r[5] += w[i] * ci * ac[i];
    r[6] += w[i] * ac2[i];
    r[7] += w[i] * aac[i];
  }
  for (int k = 0; k < 8; ++k) r[k] -= targets[k];
  return r;
}

int achieved_order(const OrderResiduals& r) {
  // Conditions per order: 1 -> [0], 2 -> [1], 3 -> [2,3], 4 -> [4..7].
  constexpr int first[5] = {0, 0, 1, 2, 4};
  constexpr int last[5] = {0, 1, 2, 4, 8};
  int order = 0;
  for (int q = 1; q <= 4; ++q) {
    for (int k = first[q]; k < last[q]; ++k)
      if (!(std::abs(r[k]) < kOrderConditionTolerance)) return order;
    order = q;
  }
  return order;
}

std::string trim_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

}  // namespace

const std::vector<MethodInfo>& known_methods() {
  static const std::vector<MethodInfo> methods = {
      {"BS3_3F", 3, true, 3, 2, {0.60, -0.20, 0.00}},
      {"RDPK3_5F", 5, true, 3, 2, {0.70, -0.23, 0.00}},
      {"RDPK4_9F", 9, true, 4, 3, {0.38, -0.18, 0.01}},
      {"SSP3_4", 4, false, 3, 2, {0.55, -0.27, 0.05}},
  };
  return methods;
}

const MethodInfo& method_info(std::string_view name) {
  for (const auto& m : known_methods())
    if (m.name == name) return m;
  throw LookupError("unknown Runge-Kutta method '" + std::string(name) + "'");
}

std::filesystem::path tableau_directory() {
  if (const char* env = std::getenv("RKCTL_TABLEAU_DIR"); env && *env)
    return std::filesystem::path(env);
  return std::filesystem::path(RKCTL_TABLEAU_DIR);
}

ButcherTableau builtin(std::string_view name) {
  const auto& info = method_info(name);
  if (info.name == "BS3_3F") return make_bs3();
  if (info.name == "SSP3_4") return make_ssp43();

  const auto path = tableau_directory() / (std::string(info.name) + ".txt");
  if (!std::filesystem::exists(path))
    throw LookupError("coefficients for " + std::string(info.name) +
                      " are not available (expected " + path.string() + ")");
  auto tab = load_tableau(path);
  if (tab.name() != info.name)
    throw IntegrityError(path.string() + " declares method '" + tab.name() +
                         "', expected '" + std::string(info.name) + "'");
  check_integrity(tab);
  if (tab.stages() != info.stages || tab.fsal() != info.fsal ||
      tab.order_q() != info.order_q)
    throw IntegrityError(path.string() + ": stage count, FSAL flag or order "
                         "does not match " + std::string(info.name));
  return tab;
}

bool builtin_available(std::string_view name) {
  try {
    (void)builtin(name);
    return true;
  } catch (const Error&) {
    return false;
  }
}

ButcherTableau parse_tableau(std::string_view text, std::string default_name) {
  std::map<std::string, std::vector<std::string>> blocks;
  std::string current;
  std::istringstream in{std::string(text)};
  std::string line;
  static const char* labels[] = {"A", "b", "bhat", "c", "order", "order_hat", "fsal", "name"};
  while (std::getline(in, line)) {
    std::istringstream tokens(trim_comment(line));
    std::string tok;
    while (tokens >> tok) {
      if (std::find(std::begin(labels), std::end(labels), tok) != std::end(labels)) {
        current = tok;
        if (blocks.count(current))
          throw IntegrityError("coefficient block '" + tok + "' appears twice");
        blocks[current];
        continue;
      }
      if (current.empty())
        throw IntegrityError("value '" + tok + "' before any block label");
      blocks[current].push_back(tok);
    }
  }
  for (const char* required : {"A", "b", "bhat", "c", "order", "order_hat"})
    if (!blocks.count(required))
      throw IntegrityError(std::string("coefficient block '") + required + "' missing");

  auto numbers = [&](const std::string& key) {
    std::vector<double> out;
    for (const auto& tok : blocks[key]) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0')
        throw IntegrityError("block '" + key + "': '" + tok + "' is not a number");
      out.push_back(v);
    }
    return out;
  };
  auto single_int = [&](const std::string& key) {
    const auto v = numbers(key);
    if (v.size() != 1 || v[0] != std::floor(v[0]))
      throw IntegrityError("block '" + key + "' must hold one integer");
    return static_cast<int>(v[0]);
  };

  const auto b = numbers("b");
  const auto s = b.size();
  const auto flat = numbers("A");
  if (flat.size() != s * s)
    throw IntegrityError("block 'A' holds " + std::to_string(flat.size()) +
                         " values, expected " + std::to_string(s * s));
  std::vector<std::vector<double>> a(s, std::vector<double>(s));
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) a[i][j] = flat[i * s + j];

  std::string name = std::move(default_name);
  if (blocks.count("name") && !blocks["name"].empty()) name = blocks["name"].front();

  ButcherTableau tab = [&] {
    try {
      return ButcherTableau::create(name, a, b, numbers("bhat"), numbers("c"),
                                    single_int("order"), single_int("order_hat"));
    } catch (const ContractViolation& e) {
      throw IntegrityError(e.what());
    }
  }();
  if (blocks.count("fsal")) {
    const auto& tok = blocks["fsal"];
    if (tok.size() != 1) throw IntegrityError("block 'fsal' must hold one flag");
    const bool declared = tok[0] == "1" || tok[0] == "true";
    if (!declared && tok[0] != "0" && tok[0] != "false")
      throw IntegrityError("block 'fsal' must be 0/1/true/false");
    if (declared != tab.fsal())
      throw IntegrityError(name + ": declared fsal flag disagrees with bhat[s+1]");
  }
  return tab;
}

ButcherTableau load_tableau(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open coefficient file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_tableau(buffer.str(), path.stem().string());
}

std::string format_tableau(const ButcherTableau& tab) {
  const int s = tab.stages();
  std::string out;
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out += "name\n" + tab.name() + "\nA\n";
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) out += (j ? " " : "") + num(tab.a(i, j));
    out += '\n';
  }
  auto vec = [&](const char* label, const std::vector<double>& v) {
    out += label;
    out += '\n';
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + num(v[i]);
    out += '\n';
  };
  vec("b", tab.b());
  vec("bhat", tab.b_hat());
  vec("c", tab.c());
  out += "order\n" + std::to_string(tab.order_q()) + "\norder_hat\n" +
         std::to_string(tab.order_q_hat()) + "\nfsal\n" + (tab.fsal() ? "1" : "0") +
         "\n";
  return out;
}

OrderReport validate_order(const ButcherTableau& tab) {
  const auto s = static_cast<std::size_t>(tab.stages());
  std::vector<double> a(s * s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) a[i * s + j] = tab.a(int(i), int(j));

  OrderReport report;
  report.main_residuals = residuals(tab.b(), a, tab.c());
  report.main_order = achieved_order(report.main_residuals);

  const auto n = s + 1;
  std::vector<double> ext(n * n, 0.0);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) ext[i * n + j] = a[i * s + j];
  for (std::size_t j = 0; j < s; ++j) ext[s * n + j] = tab.b()[j];
  auto c_ext = tab.c();
  c_ext.push_back(1.0);
  report.embedded_residuals = residuals(tab.b_hat(), ext, c_ext);
  report.embedded_order = achieved_order(report.embedded_residuals);
  return report;
}

void check_integrity(const ButcherTableau& tab) {
  const int s = tab.stages();
  const std::string& n = tab.name();
  for (int i = 0; i < s; ++i) {
    double row = 0.0;
    for (int j = 0; j < s; ++j) row += tab.a(i, j);
    if (std::abs(row - tab.c()[i]) > 1e-13)
      throw IntegrityError(n + ": c[" + std::to_string(i) + "] is not the row sum of A");
  }
  double sb = 0.0, sbh = 0.0;
  for (double v : tab.b()) sb += v;
  for (double v : tab.b_hat()) sbh += v;
  if (std::abs(sb - 1.0) > 1e-13) throw IntegrityError(n + ": weights b do not sum to one");
  if (std::abs(sbh - 1.0) > 1e-13)
    throw IntegrityError(n + ": embedded weights do not sum to one");
  if (tab.order_q_hat() != tab.order_q() - 1)
    throw IntegrityError(n + ": embedded order must be order - 1");
  const auto report = validate_order(tab);
  const int q_cap = std::min(tab.order_q(), 4);
  if (report.main_order < q_cap)
    throw IntegrityError(n + ": main weights reach order " +
                         std::to_string(report.main_order) + ", declared " +
                         std::to_string(tab.order_q()));
  if (report.embedded_order < std::min(tab.order_q_hat(), 4))
    throw IntegrityError(n + ": embedded weights reach order " +
                         std::to_string(report.embedded_order) + ", declared " +
                         std::to_string(tab.order_q_hat()));
}

std::vector<double> stability_polynomial(const ButcherTableau& tab) {
  const int s = tab.stages();
  std::vector<double> coeffs(static_cast<std::size_t>(s) + 1, 0.0);
  coeffs[0] = 1.0;
  std::vector<double> v(static_cast<std::size_t>(s), 1.0), next(v.size());
  for (int k = 1; k <= s; ++k) {
    double dot = 0.0;
    for (int i = 0; i < s; ++i) dot += tab.b()[i] * v[i];
    coeffs[k] = dot;
    for (int i = 0; i < s; ++i) {
      double acc = 0.0;
      for (int j = 0; j < i; ++j) acc += tab.a(i, j) * v[j];
      next[i] = acc;
    }
    v.swap(next);
  }
  return coeffs;
}

std::complex<double> evaluate_polynomial(const std::vector<double>& coefficients,
                                         std::complex<double> z) {
  std::complex<double> acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
    acc = acc * z + *it;
  return acc;
}

std::complex<double> stability_function(const ButcherTableau& tab,
                                        std::complex<double> z) {
  return evaluate_polynomial(stability_polynomial(tab), z);
}

double effective_stage_count(const ButcherTableau& tab) {
  return static_cast<double>(tab.stages());
}

double real_axis_stability_limit(const ButcherTableau& tab) {
  const auto poly = stability_polynomial(tab);
  auto stable = [&](double x) { return std::abs(evaluate_polynomial(poly, -x)) <= 1.0; };
  constexpr double step = 1e-3;
  double lo = 0.0;
  while (stable(lo + step)) {
    lo += step;
    if (lo > 1e4) return lo;
  }
  double hi = lo + step;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (stable(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace rkctl
