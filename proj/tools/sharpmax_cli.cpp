#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sharpmax/battery.hpp"
#include "sharpmax/bellman.hpp"
#include "sharpmax/extremal.hpp"
#include "sharpmax/report.hpp"
#include "sharpmax/special_functions.hpp"

namespace {

using nlohmann::json;
using namespace sharpmax;

enum class Format { kText, kJson, kCsv };

struct Common {
  std::string output;
  std::optional<Format> requested;
  Format format = Format::kText;
};

struct Point {
  double p = 2.0;
  double f = 1.0;
  double F = 1.0;
  double k = 1.0;
};

// Shortest representation that round-trips.
std::string num(double x) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

// Writes to --output when given, stdout otherwise.
void emit(const Common& common, const std::string& text) {
  if (common.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(common.output);
  if (!out) throw std::runtime_error("cannot open output file " + common.output);
  out << text;
}

void add_common(CLI::App* cmd, Common& common) {
  const std::map<std::string, Format> formats{
      {"text", Format::kText}, {"json", Format::kJson}, {"csv", Format::kCsv}};
  cmd->add_option("-o,--output", common.output, "Write results to this file");
  cmd->add_option("--format", common.requested, "text, json or csv")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
}

void add_point(CLI::App* cmd, Point& pt, bool with_k) {
  cmd->add_option("--p", pt.p, "Exponent p > 1")->capture_default_str();
  cmd->add_option("--f", pt.f, "Mean f > 0")->capture_default_str();
  cmd->add_option("--F", pt.F, "p-moment F >= f^p")->capture_default_str();
  if (with_k) cmd->add_option("--k", pt.k, "Measure of K in (0, 1]")->capture_default_str();
}

int run_omega(const Common& common, double p_value, int grid) {
  if (grid < 1) throw std::invalid_argument("--grid must be at least 1");
  const Exponent p(p_value);
  json rows = json::array();
  std::ostringstream csv;
  csv << "p,x,omega,h_of_omega,u\n";
  for (int i = 0; i <= grid; ++i) {
    const double x = static_cast<double>(i) / grid;
    const double w = omega_p(x, p);
    const double h = h_poly(w, p);
    json row{{"p", p.p()}, {"x", x}, {"omega", w}, {"h_of_omega", h}, {"u", nullptr}};
    csv << num(p.p()) << ',' << num(x) << ',' << num(w) << ',' << num(h) << ',';
    if (x > 0.0) {
      const double u = u_func(x, p);
      row["u"] = u;
      csv << num(u);
    }
    csv << '\n';
    rows.push_back(row);
  }
  emit(common, common.format == Format::kJson ? rows.dump(2) + "\n" : csv.str());
  return 0;
}

int run_bellman2(const Common& common, const Point& pt) {
  const BellmanQuery q(Exponent(pt.p), pt.f, pt.F);
  const double value = bellman_two_var(q);
  switch (common.format) {
    case Format::kJson:
      emit(common, json{{"p", pt.p}, {"f", pt.f}, {"F", pt.F}, {"value", value}}.dump(2) + "\n");
      break;
    case Format::kCsv:
      emit(common, "p,f,F,value\n" + num(pt.p) + ',' + num(pt.f) + ',' + num(pt.F) + ',' +
                       num(value) + '\n');
      break;
    case Format::kText:
      emit(common, num(value) + "\n");
      break;
  }
  return 0;
}

int run_bellman3(const Common& common, const Point& pt) {
  const BellmanQuery q(Exponent(pt.p), pt.f, pt.F, pt.k);
  const ThreeVarResult r = bellman_three_var(q);
  switch (common.format) {
    case Format::kJson:
      emit(common, json{{"p", pt.p},
                        {"f", pt.f},
                        {"F", pt.F},
                        {"k", pt.k},
                        {"value", r.value},
                        {"argmax_B", r.argmax_b}}
                           .dump(2) +
                       "\n");
      break;
    case Format::kCsv:
      emit(common, "p,f,F,k,value,argmax_B\n" + num(pt.p) + ',' + num(pt.f) + ',' +
                       num(pt.F) + ',' + num(pt.k) + ',' + num(r.value) + ',' +
                       num(r.argmax_b) + '\n');
      break;
    case Format::kText:
      emit(common, num(r.value) + "  argmax_B=" + num(r.argmax_b) + "\n");
      break;
  }
  return 0;
}

int run_verify(const Common& common, const BatteryOptions& options) {
  const BatteryResult result = run_battery(options);
  json doc{{"seed", options.seed},
           {"trees", result.trees},
           {"trees_passed", result.trees_passed},
           {"checks", json::array()}};
  std::ostringstream text;
  for (const CheckSummary& c : result.checks) {
    doc["checks"].push_back({{"check", c.check},
                             {"total", c.total},
                             {"passed", c.passed},
                             {"worst", to_json(c.worst)}});
    text << std::left << std::setw(26) << c.check << c.passed << '/' << c.total
         << "  worst margin " << num(c.worst.margin) << '\n';
  }
  text << result.trees_passed << '/' << result.trees << " passed\n";
  emit(common, common.format == Format::kJson ? doc.dump(2) + "\n" : text.str());

  if (result.all_passed()) return 0;
  json failures = json::array();
  for (const VerificationReport& r : result.failures) failures.push_back(to_json(r));
  std::cerr << failures.dump(2) << '\n';
  return 1;
}

int run_certify(const Common& common, const Point& pt, const CertifyOptions& options) {
  const VerificationReport report =
      certify_sharpness(BellmanQuery(Exponent(pt.p), pt.f, pt.F, pt.k), options);
  const std::string doc = to_json(report).dump(2) + "\n";
  if (common.format == Format::kJson) {
    emit(common, doc);
  } else {
    emit(common, std::string(report.passed ? "PASS" : "FAIL") + "  lower=" + num(report.lhs) +
                     "  value=" + num(report.rhs) +
                     "  ratio=" + num(report.details.at("ratio")) + "\n");
  }
  if (report.passed) return 0;
  std::cerr << doc;
  return 1;
}

int run_sweep(const Common& common, const Point& pt, int ratios, int ks) {
  if (ratios < 1 || ks < 1) throw std::invalid_argument("sweep grids need at least one point");
  const Exponent p(pt.p);
  std::ostringstream csv;
  json rows = json::array();
  csv << "p,f,F,k,value,argmax_B,feasible_lo,feasible_hi\n";
  for (int i = 1; i <= ratios; ++i) {
    const double ratio = static_cast<double>(i) / ratios;
    const double F = std::pow(pt.f, p.p()) / ratio;
    for (int j = 1; j <= ks; ++j) {
      const double k = static_cast<double>(j) / ks;
      const BellmanQuery q(p, pt.f, F, k);
      const ThreeVarResult r = bellman_three_var(q);
      const FeasibleInterval iv = k < 1.0 ? feasible_interval(q) : FeasibleInterval{pt.f, pt.f};
      csv << num(p.p()) << ',' << num(pt.f) << ',' << num(F) << ',' << num(k) << ','
          << num(r.value) << ',' << num(r.argmax_b) << ',' << num(iv.lo) << ','
          << num(iv.hi) << '\n';
      rows.push_back({{"p", p.p()},
                      {"f", pt.f},
                      {"F", F},
                      {"k", k},
                      {"value", r.value},
                      {"argmax_B", r.argmax_b},
                      {"feasible_lo", iv.lo},
                      {"feasible_hi", iv.hi}});
    }
  }
  emit(common, common.format == Format::kJson ? rows.dump(2) + "\n" : csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sharp Bellman functions of the tree maximal operator"};
  app.set_config("--config", "", "TOML or INI file; command-line flags take precedence");
  app.require_subcommand(1);

  Common common;
  Point pt;

  auto* omega = app.add_subcommand("omega", "Tabulate omega_p, H_p(omega_p) and U over [0, 1]");
  int omega_grid = 100;
  omega->add_option("--p", pt.p, "Exponent p > 1")->capture_default_str();
  omega->add_option("--grid", omega_grid, "Number of grid intervals")->capture_default_str();
  add_common(omega, common);

  auto* bellman2 = app.add_subcommand("bellman2", "Two-variable Bellman function B_p(f, F)");
  add_point(bellman2, pt, false);
  add_common(bellman2, common);

  auto* bellman3 = app.add_subcommand("bellman3", "Three-variable Bellman function B_p(f, F, k)");
  add_point(bellman3, pt, true);
  add_common(bellman3, common);

  auto* verify = app.add_subcommand("verify", "Randomized inequality battery on simulated trees");
  BatteryOptions battery;
  verify->add_option("--seed", battery.seed, "Master seed")->capture_default_str();
  verify->add_option("--trees", battery.trees, "Number of random trees")->capture_default_str();
  verify->add_option("--depth", battery.max_depth, "Maximum tree depth")->capture_default_str();
  verify->add_option("--leaves", battery.max_leaves, "Maximum leaves per tree")
      ->capture_default_str();
  verify->add_option("--k-sets", battery.k_sets_per_tree, "Random sets K per tree")
      ->capture_default_str();
  verify->add_option("--max-value", battery.max_value, "Upper end of leaf values")
      ->capture_default_str();
  add_common(verify, common);

  auto* certify = app.add_subcommand("certify", "Certify sharpness by explicit construction");
  CertifyOptions certify_options;
  add_point(certify, pt, true);
  certify->add_option("--epsilon", certify_options.epsilon, "Allowed relative gap")
      ->capture_default_str();
  certify->add_option("--r-max", certify_options.r_max, "Largest chain ratio")
      ->capture_default_str();
  certify->add_option("--depth-max", certify_options.depth_max, "Largest chain depth")
      ->capture_default_str();
  certify->add_option("--moment-tolerance", certify_options.moment_tolerance,
                      "Allowed relative drift of the achieved moments")
      ->capture_default_str();
  add_common(certify, common);

  auto* sweep = app.add_subcommand("sweep", "Tabulate B_p(f, F, k) over (f^p/F, k) grids");
  int sweep_ratios = 20;
  int sweep_ks = 20;
  sweep->add_option("--p", pt.p, "Exponent p > 1")->capture_default_str();
  sweep->add_option("--f", pt.f, "Mean f > 0")->capture_default_str();
  sweep->add_option("--ratios", sweep_ratios, "Grid points for f^p/F in (0, 1]")
      ->capture_default_str();
  sweep->add_option("--ks", sweep_ks, "Grid points for k in (0, 1]")->capture_default_str();
  add_common(sweep, common);

  CLI11_PARSE(app, argc, argv);

  const bool tabular = *omega || *sweep;
  common.format = common.requested.value_or(tabular ? Format::kCsv : Format::kText);
  if (tabular && common.format == Format::kText) common.format = Format::kCsv;

  try {
    if (*omega) return run_omega(common, pt.p, omega_grid);
    if (*bellman2) return run_bellman2(common, pt);
    if (*bellman3) return run_bellman3(common, pt);
    if (*verify) return run_verify(common, battery);
    if (*certify) return run_certify(common, pt, certify_options);
    if (*sweep) return run_sweep(common, pt, sweep_ratios, sweep_ks);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
