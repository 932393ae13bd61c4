#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "splinegen/analysis.hpp"
#include "splinegen/bspline.hpp"
#include "splinegen/expspline.hpp"
#include "splinegen/fourier.hpp"
#include "splinegen/sampled.hpp"
#include "splinegen/selfref.hpp"

namespace splinegen::cli {

namespace {

using nlohmann::ordered_json;

// Raised for inconsistent parameter sets; maps to exit code 2.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

double parse_number(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value))
    throw UsageError("not a finite number: '" + std::string(text) + "'");
  return value;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_number(std::string_view(text).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

Complex parse_complex(const std::string& text) {
  const auto parts = parse_list(text);
  if (parts.size() == 1) return {parts[0], 0.0};
  if (parts.size() != 2) throw UsageError("complex values are written re,im");
  return {parts[0], parts[1]};
}

double default_tolerance() {
  if (const char* env = std::getenv("SPLINEGEN_TOL")) {
    const double tol = parse_number(env);
    if (!(tol > 0.0)) throw UsageError("SPLINEGEN_TOL must be positive");
    return tol;
  }
  return 1e-8;
}

struct Config {
  std::string family = "poly";
  int n = 3;
  std::string z = "3,1";
  std::string rates = "1,-1";
  double a = 1.0;
  std::string alphas;
  std::string partition;
  std::string knots;
  std::string grid = "0:4:0.01";
  std::optional<double> tol;
  std::string output = "csv";
  std::uint64_t seed = kDefaultSeed;
  std::string out_path;
  std::string omegas;
  int m = 2;
  std::string orders = "8,16,24";
  std::string x_list;
  int terms = 64;
  std::string window = "0:1";
  int span = 40;
  int points_per_unit = 256;
  std::optional<int> max_order;
  std::string meshes = "0.125,0.0625,0.03125,0.015625";
  bool smooth = false;

  double tolerance() const { return tol ? *tol : default_tolerance(); }
};

void add_family_options(CLI::App* app, Config& c) {
  app->add_option("--family", c.family, "poly | complex-poly | exp | complex-exp")
      ->check(CLI::IsMember({"poly", "complex-poly", "exp", "complex-exp"}));
  app->add_option("--n", c.n, "integer order");
  app->add_option("--z", c.z, "complex order re,im");
  app->add_option("--rates", c.rates, "rate tuple a1,...,aN");
  app->add_option("--a", c.a, "rate of the complex exponential family");
  app->add_option("--tol", c.tol, "evaluation tolerance (default 1e-8 or SPLINEGEN_TOL)");
  app->add_option("--output", c.output, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--seed", c.seed, "seed for randomized point sets");
  app->add_option("--out", c.out_path, "output file (default stdout)");
}

void add_fractal_options(CLI::App* app, Config& c) {
  app->add_option("--alphas", c.alphas, "vertical scaling factors");
  app->add_option("--partition", c.partition, "uniform | arctan-shift")
      ->check(CLI::IsMember({"uniform", "arctan-shift"}));
  app->add_option("--knots", c.knots, "arctan-shift knots 0,x1,...,x_{N-1}");
  app->add_flag("--smooth", c.smooth, "require |alpha_n| N^(N-2) < 1 (poly family)");
}

SplineFamily make_family(const Config& c) {
  if (c.family == "poly") return SplineFamily::poly(c.n);
  if (c.family == "complex-poly") return SplineFamily::complex_poly(ComplexOrder(parse_complex(c.z)));
  if (c.family == "exp") return SplineFamily::exp(RateTuple(parse_list(c.rates)));
  return SplineFamily::complex_exp(ComplexOrder(parse_complex(c.z)), c.a);
}

std::string family_label(const Config& c) {
  std::string label = c.family;
  if (c.family == "poly") label += " n=" + std::to_string(c.n);
  if (c.family == "complex-poly") label += " z=" + c.z;
  if (c.family == "exp") label += " rates=" + c.rates;
  if (c.family == "complex-exp") label += " z=" + c.z + " a=" + format_double(c.a);
  if (!c.alphas.empty()) label += " alphas=" + c.alphas;
  return label;
}

std::optional<Partition> make_partition(const Config& c, int maps) {
  if (c.partition.empty()) {
    if (!c.knots.empty()) throw UsageError("--knots needs --partition arctan-shift");
    return std::nullopt;
  }
  if (c.partition == "uniform") return Partition::bounded_uniform(maps);
  std::vector<double> knots;
  if (c.knots.empty()) {
    for (int i = 0; i < maps; ++i) knots.push_back(i);
  } else {
    knots = parse_list(c.knots);
  }
  if (static_cast<int>(knots.size()) != maps)
    throw UsageError("--knots must list one knot per scaling factor");
  return Partition::arctan_shift(std::move(knots));
}

FixedPointHandle make_fractal(const Config& c) {
  if (c.alphas.empty()) throw UsageError("fractal families need --alphas");
  const auto values = parse_list(c.alphas);
  const ScalingVector alphas(Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())));
  const SplineFamily family = make_family(c);
  return family.fractal(alphas, c.tolerance(), make_partition(c, alphas.size()), c.smooth);
}

// Writes to --out when given, else to the command's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw UsageError("cannot open output file '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

ordered_json to_json(const StudyReport& r) {
  ordered_json j;
  j["name"] = r.name;
  j["inputs"] = r.inputs;
  j["metrics"] = r.metrics;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["seed"] = r.seed;
  j["version"] = kVersion;
  return j;
}

ordered_json to_json(const SampledFunction& s) {
  ordered_json j;
  std::vector<double> re(static_cast<std::size_t>(s.size()));
  std::vector<double> im(re.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    re[static_cast<std::size_t>(i)] = s.values[i].real() == 0.0 ? 0.0 : s.values[i].real();
    im[static_cast<std::size_t>(i)] = s.values[i].imag() == 0.0 ? 0.0 : s.values[i].imag();
  }
  j["x"] = std::vector<double>(s.x.data(), s.x.data() + s.x.size());
  j["re"] = re;
  j["im"] = im;
  return j;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_sample(const Config& c, std::ostream& out, bool require_fractal) {
  if (require_fractal && c.alphas.empty()) throw UsageError("fractal needs --alphas");
  const GridSpec grid = GridSpec::parse(c.grid);
  grid.validate();
  SampledFunction samples;
  if (!c.alphas.empty()) {
    const FixedPointHandle handle = make_fractal(c);
    samples = sample([&handle](double x) { return handle(x); }, grid);
  } else if (c.family == "poly") {
    samples = sample(IntegerOrder(c.n), grid);
  } else if (c.family == "complex-poly") {
    samples = sample(ComplexOrder(parse_complex(c.z)), grid);
  } else {
    samples = sample(make_family(c).evaluator(), grid);
  }
  Sink sink(c.out_path, out);
  if (c.output == "json") {
    *sink << to_json(samples).dump() << '\n';
  } else {
    write_csv(*sink, samples);
  }
  return kPass;
}

std::vector<double> fourier_grid(const Config& c) {
  if (c.omegas.empty()) {
    // 0 and 19 log-spaced frequencies in [0.1, 40].
    std::vector<double> w{0.0};
    for (int i = 0; i < 19; ++i) w.push_back(0.1 * std::pow(400.0, i / 18.0));
    return w;
  }
  if (c.omegas.find(':') != std::string::npos) {
    const GridSpec g = GridSpec::parse(c.omegas);
    g.validate();
    const Eigen::VectorXd nodes = g.nodes();
    return {nodes.data(), nodes.data() + nodes.size()};
  }
  return parse_list(c.omegas);
}

int cmd_fourier(const Config& c, std::ostream& out) {
  const SplineFamily family = make_family(c);
  const double tol = c.tolerance();
  const auto omegas = fourier_grid(c);
  ordered_json rows = ordered_json::array();
  std::ostringstream csv;
  csv << "omega,closed_re,closed_im,numeric_re,numeric_im,abs_err\n";
  for (double w : omegas) {
    const Complex closed = family.transform(w);
    const auto numeric = numeric_ft(family.evaluator(), w, family.upper(), 1e-2 * tol, family.decay());
    const double err = std::abs(closed - numeric.value);
    csv << format_double(w) << ',' << format_double(closed.real()) << ','
        << format_double(closed.imag()) << ',' << format_double(numeric.value.real()) << ','
        << format_double(numeric.value.imag()) << ',' << format_double(err) << '\n';
    rows.push_back({{"omega", w},
                    {"closed_re", closed.real()},
                    {"closed_im", closed.imag()},
                    {"numeric_re", numeric.value.real()},
                    {"numeric_im", numeric.value.imag()},
                    {"abs_err", err},
                    {"error_bound", numeric.error_bound()}});
  }
  Sink sink(c.out_path, out);
  if (c.output == "json") {
    *sink << rows.dump() << '\n';
  } else {
    *sink << csv.str();
  }
  return kPass;
}

std::vector<int> parse_orders(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_list(text)) {
    if (v != std::floor(v)) throw UsageError("orders must be integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::pair<double, double> parse_window(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("--window is lo:hi");
  return {parse_number(std::string_view(text).substr(0, colon)),
          parse_number(std::string_view(text).substr(colon + 1))};
}

double sine_target(double x) { return std::sin(2.0 * std::numbers::pi * x); }

StudyReport run_study(const std::string& study, const Config& c) {
  if (study == "integral") {
    const SplineFamily family = make_family(c);
    const double tol = c.tol ? *c.tol : (family.unbounded() ? 1e-4 : 1e-10);
    return integral_check(family, tol);
  }
  if (study == "convolution") return convolution_check(c.m, c.n, c.tol.value_or(1e-8));
  if (study == "gaussian-limit") return gaussian_limit(parse_orders(c.orders));
  if (study == "decay") {
    const ComplexOrder z(parse_complex(c.z));
    return decay_exponent(z, c.x_list.empty() ? default_decay_points(z) : parse_list(c.x_list));
  }
  if (study == "interp-order") return interpolation_order(c.n, sine_target, parse_list(c.meshes));
  if (study == "riesz") return riesz_bounds(ComplexOrder(parse_complex(c.z)), default_riesz_grid(), c.terms);
  if (study == "partition-unity") {
    const auto [lo, hi] = parse_window(c.window);
    return partition_of_unity(ComplexOrder(parse_complex(c.z)), lo, hi, c.span);
  }
  if (study == "residual")
    return residual_study(family_label(c), make_fractal(c), c.tolerance(), c.seed);
  if (study == "contraction")
    return contraction_study(family_label(c), make_fractal(c), c.points_per_unit, 1e-10);
  if (study == "joinup") {
    const FixedPointHandle handle = make_fractal(c);
    const int order = c.max_order.value_or(c.family == "poly" ? std::max(0, c.n - 2) : 0);
    return joinup_study(family_label(c), handle, order, c.points_per_unit);
  }
  throw UsageError("unknown study '" + study + "'");
}

// Reference parameter sets and the default configuration of every study.
std::vector<std::pair<std::string, Config>> battery() {
  std::vector<std::pair<std::string, Config>> runs;
  const auto add = [&runs](const std::string& study, auto&& edit) {
    Config c;
    edit(c);
    runs.emplace_back(study, c);
  };
  add("integral", [](Config& c) { c.family = "poly"; c.n = 3; });
  add("integral", [](Config& c) { c.family = "complex-poly"; c.z = "3.5,0.5"; });
  add("integral", [](Config& c) { c.family = "exp"; c.rates = "1,-1"; });
  add("integral", [](Config& c) { c.family = "complex-exp"; c.z = "1.4142135623730951,1"; });
  add("convolution", [](Config& c) { c.m = 1; c.n = 1; });
  add("convolution", [](Config& c) { c.m = 2; c.n = 3; });
  add("convolution", [](Config& c) { c.m = 3; c.n = 3; });
  add("gaussian-limit", [](Config&) {});
  add("decay", [](Config& c) { c.z = "3,0"; });
  add("decay", [](Config& c) { c.z = "2.5,1"; });
  for (int n = 2; n <= 4; ++n) add("interp-order", [n](Config& c) { c.n = n; });
  add("riesz", [](Config& c) { c.z = "2,0"; });
  add("riesz", [](Config& c) { c.z = "3,1"; });
  add("partition-unity", [](Config& c) { c.z = "4,0"; });
  add("partition-unity", [](Config& c) { c.z = "2.5,0"; });
  add("partition-unity", [](Config& c) { c.z = "3,1"; });
  const auto bounded = std::vector<std::function<void(Config&)>>{
      [](Config& c) { c.family = "poly"; c.n = 2; c.alphas = "0.75,0.75"; },
      [](Config& c) { c.family = "poly"; c.n = 3; c.alphas = "0.25,0.25,0.25"; },
      [](Config& c) { c.family = "exp"; c.rates = "2,-2"; c.alphas = "0.25,0.25"; },
      [](Config& c) { c.family = "exp"; c.rates = "4,-3,1"; c.alphas = "0.75,-0.25,0.5"; }};
  for (const auto& edit : bounded) add("residual", edit);
  add("residual", [](Config& c) {
    c.family = "complex-poly"; c.z = "3.14159,1"; c.alphas = "0.75,-0.5"; c.partition = "arctan-shift";
  });
  add("residual", [](Config& c) {
    c.family = "complex-exp"; c.z = "1.4142135623730951,1"; c.a = 1.0; c.alphas = "0.75,-0.5";
    c.partition = "arctan-shift";
  });
  for (const auto& edit : bounded) add("contraction", edit);
  add("joinup", bounded[1]);
  add("joinup", bounded[2]);
  return runs;
}

int cmd_study(std::ostream& out, const std::string& out_path) {
  ordered_json reports = ordered_json::array();
  bool all = true;
  for (const auto& [study, config] : battery()) {
    const StudyReport r = run_study(study, config);
    all = all && r.pass;
    reports.push_back(to_json(r));
  }
  Sink sink(out_path, out);
  *sink << reports.dump(2) << '\n';
  return all ? kPass : kStudyFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cardinal, complex-order, exponential and fractal B-splines", "splinegen"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Config c;
  std::string study;
  std::string study_out;

  auto* sample_cmd = app.add_subcommand("sample", "sample a spline (or its fractal extension) on a grid");
  add_family_options(sample_cmd, c);
  add_fractal_options(sample_cmd, c);
  sample_cmd->add_option("--grid", c.grid, "start:stop:step[:offset]");

  auto* fractal_cmd = app.add_subcommand("fractal", "sample a fractal extension (requires --alphas)");
  add_family_options(fractal_cmd, c);
  add_fractal_options(fractal_cmd, c);
  fractal_cmd->add_option("--grid", c.grid, "start:stop:step[:offset]");

  auto* fourier_cmd = app.add_subcommand("fourier", "closed-form transform against numeric quadrature");
  add_family_options(fourier_cmd, c);
  fourier_cmd->add_option("--omegas", c.omegas, "w1,w2,... or start:stop:step");

  auto* verify_cmd = app.add_subcommand("verify", "run one verification study");
  verify_cmd->add_option("study", study, "integral | convolution | gaussian-limit | decay | "
                                         "interp-order | riesz | partition-unity | residual | "
                                         "contraction | joinup")
      ->required();
  add_family_options(verify_cmd, c);
  add_fractal_options(verify_cmd, c);
  verify_cmd->add_option("--m", c.m, "first convolution order");
  verify_cmd->add_option("--orders", c.orders, "orders for the Gaussian limit");
  verify_cmd->add_option("--x-list", c.x_list, "abscissae for the decay fit");
  verify_cmd->add_option("--K", c.terms, "periodization terms for Riesz bounds");
  verify_cmd->add_option("--window", c.window, "lo:hi window for the partition of unity");
  verify_cmd->add_option("--J", c.span, "shift range for the partition of unity");
  verify_cmd->add_option("--M", c.points_per_unit, "grid points per unit interval");
  verify_cmd->add_option("--max-order", c.max_order, "highest derivative order for join-up");
  verify_cmd->add_option("--meshes", c.meshes, "mesh widths for the interpolation order");

  auto* study_cmd = app.add_subcommand("study", "run every study on its default parameters");
  study_cmd->add_option("--out", study_out, "output file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "splinegen: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*sample_cmd) return cmd_sample(c, out, false);
    if (*fractal_cmd) return cmd_sample(c, out, true);
    if (*fourier_cmd) return cmd_fourier(c, out);
    if (*study_cmd) return cmd_study(out, study_out);
    const StudyReport report = run_study(study, c);
    Sink sink(c.out_path, out);
    *sink << to_json(report).dump(2) << '\n';
    return report.pass ? kPass : kStudyFailed;
  } catch (const std::invalid_argument& e) {
    err << "splinegen: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    err << "splinegen: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "splinegen: " << e.what() << '\n';
    return kStudyFailed;
  }
}

}  // namespace splinegen::cli
