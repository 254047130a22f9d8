// Command-line front end: entropy queries, threshold sweeps and oracle runs.
//
// Exit codes: 0 success, 1 domain error or failed verification, 2 usage error.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qtsallis/classical_info.hpp"
#include "qtsallis/oracle_verify.hpp"
#include "qtsallis/report_json.hpp"
#include "qtsallis/separability_solver.hpp"
#include "qtsallis/werner_family.hpp"

namespace {

using namespace qtsallis;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 15 significant digits, locale independent. Without `sci` the output is
// always positional, however small the magnitude.
std::string format_number(double v, bool sci) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[512];
  if (sci) {
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 14);
    return std::string(buf, res.ptr);
  }
  const int exponent = static_cast<int>(std::floor(std::log10(std::abs(v))));
  const int decimals = std::max(0, 14 - exponent);
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  std::string s(buf, res.ptr);
  if (s.find('.') != std::string::npos) {
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

double parse_double(const std::string& token) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || token.empty()) throw UsageError("not a number: '" + token + "'");
  return v;
}

unsigned parse_unsigned(const std::string& token) {
  unsigned v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty())
    throw UsageError("not a nonnegative integer: '" + token + "'");
  return v;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) out.push_back(item);
  if (!s.empty() && s.back() == ',') out.emplace_back();
  return out;
}

class Output {
public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
  std::ofstream file_;
};

struct EntropyArgs {
  std::string dist;
  std::string werner;
  double q = 0.0;
  unsigned condition_on = 0;
  bool sci = false;
};

int cmd_entropy(const EntropyArgs& a, bool have_condition) {
  if (a.dist.empty() == a.werner.empty()) throw UsageError("entropy needs exactly one of --dist or --werner");
  const EntropicIndex q(a.q);
  if (!a.dist.empty()) {
    if (have_condition) throw UsageError("--condition-on applies only to --werner");
    std::vector<double> p;
    for (const auto& tok : split_commas(a.dist)) p.push_back(parse_double(tok));
    std::cout << format_number(classical::tsallis_entropy(ProbDist(std::move(p)), q), a.sci) << '\n';
    return 0;
  }
  const auto parts = split_commas(a.werner);
  if (parts.size() != 3) throw UsageError("--werner expects N,n,x");
  const WernerParams params(parse_unsigned(parts[0]), parse_unsigned(parts[1]), parse_double(parts[2]));
  const unsigned k = have_condition ? a.condition_on : params.parties - 1;
  std::cout << format_number(conditional_entropy_block(params, k, q), a.sci) << '\n';
  return 0;
}

struct ThresholdArgs {
  unsigned levels = 0;
  unsigned parties = 0;
  std::optional<double> q;
  bool asymptotic = false;
  std::optional<unsigned> condition_on;
  bool sci = false;
};

int cmd_threshold(const ThresholdArgs& a) {
  if (a.q.has_value() == a.asymptotic) throw UsageError("threshold needs exactly one of --q or --asymptotic");
  const unsigned k = a.condition_on.value_or(a.parties - 1);
  if (a.asymptotic) {
    std::cout << format_number(asymptotic_threshold_block(a.levels, a.parties, k), a.sci) << '\n';
    return 0;
  }
  const auto pt = threshold_for_q(a.levels, a.parties, k, EntropicIndex(*a.q));
  std::cout << (pt.x_star ? format_number(*pt.x_star, a.sci) : std::string("none")) << '\n';
  return 0;
}

struct SweepArgs {
  unsigned levels = 0;
  unsigned parties = 0;
  double q_min = 0.0;
  double q_max = 0.0;
  unsigned q_points = 50;
  bool log_scale = false;
  std::string format = "csv";
  std::string out;
  bool sci = false;
};

std::vector<EntropicIndex> sweep_grid(const SweepArgs& a) {
  if (!(a.q_min > 0.0) || !(a.q_min < a.q_max)) throw UsageError("sweep needs 0 < --q-min < --q-max");
  if (a.q_points < 2) throw UsageError("sweep needs --q-points >= 2");
  std::vector<EntropicIndex> grid;
  const double steps = a.q_points - 1;
  for (unsigned i = 0; i < a.q_points; ++i) {
    double q;
    if (i == 0) {
      q = a.q_min;
    } else if (i + 1 == a.q_points) {
      q = a.q_max;
    } else if (a.log_scale) {
      q = std::exp(std::log(a.q_min) + (std::log(a.q_max) - std::log(a.q_min)) * (i / steps));
    } else {
      q = a.q_min + (a.q_max - a.q_min) * (i / steps);
    }
    grid.emplace_back(q);
  }
  return grid;
}

int cmd_sweep(const SweepArgs& a) {
  if (a.format != "csv" && a.format != "json") throw UsageError("--format must be csv or json");
  const auto grid = sweep_grid(a);

  ThresholdCurve curve;
  std::optional<std::string> violation;
  try {
    curve = threshold_curve(a.levels, a.parties, grid);
  } catch (const MonotonicityError& e) {
    curve = e.curve();
    violation = e.what();
  }

  Output out(a.out);
  auto& os = out.stream();
  if (a.format == "csv") {
    os << "q,x_star,converged\n";
    for (const auto& pt : curve.points)
      os << format_number(pt.q.value(), a.sci) << ','
         << (pt.x_star ? format_number(*pt.x_star, a.sci) : std::string("none")) << ','
         << (pt.converged() ? "true" : "false") << '\n';
  } else {
    auto rows = nlohmann::json::array();
    for (const auto& pt : curve.points)
      rows.push_back({{"q", pt.q.value()},
                      {"x_star", pt.x_star ? nlohmann::json(*pt.x_star) : nlohmann::json(nullptr)},
                      {"converged", pt.converged()}});
    os << rows.dump(2) << '\n';
  }

  std::size_t multi_root = 0;
  for (const auto& pt : curve.points)
    if (pt.sign_changes > 1) ++multi_root;
  if (multi_root > 0) std::cerr << "note: " << multi_root << " q values show more than one sign change in x\n";
  if (violation) {
    std::cerr << "monotonicity violation: " << *violation << '\n';
    return 1;
  }
  std::cerr << "monotonicity: x_star non-increasing over " << curve.points.size() << " q values\n";
  return 0;
}

struct VerifyArgs {
  std::uint64_t seed = 42;
  std::size_t max_dim = kOracleDimensionCap;
  std::size_t trials = 1000;
  std::string json_path;
};

int cmd_verify(const VerifyArgs& a) {
  if (a.max_dim > kOracleDimensionCap)
    throw UsageError("--max-dim cannot exceed " + std::to_string(kOracleDimensionCap));
  const auto params = oracle::default_family_grid(a.max_dim);
  const auto qs = oracle::default_q_grid();
  auto report = oracle::verify_family(params, qs);
  const auto witness = oracle::verify_separable_witness(a.trials, a.seed);
  std::cerr << "family: " << report.entries().size() << " comparisons, " << report.failures() << " failed\n";
  std::cerr << "separable witness: " << witness.entries().size() << " comparisons, " << witness.failures()
            << " failed\n";
  report.merge(witness);
  std::cerr << "max scaled deviation: " << format_number(report.max_deviation(), true) << '\n';

  Output out(a.json_path);
  out.stream() << oracle::to_json(report).dump(2) << '\n';
  return report.passed() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonadditive (Tsallis) entropies and entanglement thresholds of Werner-like states"};
  app.require_subcommand(1);

  EntropyArgs ea;
  auto* entropy = app.add_subcommand("entropy", "Classical Tsallis entropy or Werner-state conditional entropy");
  entropy->add_option("--dist", ea.dist, "Comma-separated probabilities p1,p2,...");
  entropy->add_option("--werner", ea.werner, "Werner parameters N,n,x");
  entropy->add_option("--q", ea.q, "Entropic index")->required();
  auto* cond = entropy->add_option("--condition-on", ea.condition_on, "Number of parties conditioned on (default n-1)");
  entropy->add_flag("--sci", ea.sci, "Scientific notation");

  ThresholdArgs ta;
  auto* threshold = app.add_subcommand("threshold", "Separability boundary x* of the Werner family");
  threshold->add_option("--N", ta.levels, "Levels per party")->required();
  threshold->add_option("--n", ta.parties, "Number of parties")->required();
  threshold->add_option("--q", ta.q, "Entropic index");
  threshold->add_flag("--asymptotic", ta.asymptotic, "q -> infinity boundary");
  threshold->add_option("--condition-on", ta.condition_on, "Number of parties conditioned on (default n-1)");
  threshold->add_flag("--sci", ta.sci, "Scientific notation");

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "Threshold curve x*(q) over a q grid");
  sweep->add_option("--N", sa.levels, "Levels per party")->required();
  sweep->add_option("--n", sa.parties, "Number of parties")->required();
  sweep->add_option("--q-min", sa.q_min, "Smallest q")->required();
  sweep->add_option("--q-max", sa.q_max, "Largest q")->required();
  sweep->add_option("--q-points", sa.q_points, "Number of q values");
  sweep->add_flag("--log-scale", sa.log_scale, "Logarithmically spaced q");
  sweep->add_option("--format", sa.format, "csv or json");
  sweep->add_option("--out", sa.out, "Output file (default stdout)");
  sweep->add_flag("--sci", sa.sci, "Scientific notation");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Dense-oracle certification of the closed forms");
  verify->add_option("--seed", va.seed, "Seed for the separable-state trials");
  verify->add_option("--max-dim", va.max_dim, "Largest N^n on the family grid");
  verify->add_option("--trials", va.trials, "Number of random separable states");
  verify->add_option("--json", va.json_path, "Write the JSON report here (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*entropy) return cmd_entropy(ea, cond->count() > 0);
    if (*threshold) return cmd_threshold(ta);
    if (*sweep) return cmd_sweep(sa);
    if (*verify) return cmd_verify(va);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
