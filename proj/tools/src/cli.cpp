#include "tikreg/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "tikreg/analysis.hpp"
#include "tikreg/error.hpp"
#include "tikreg/experiment.hpp"
#include "tikreg/matrix_io.hpp"
#include "tikreg/report.hpp"

namespace tikreg {
namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BenchArgs {
  std::string problem = "phillips";
  std::size_t n = 200;
  std::vector<double> levels{0.10, 0.01, 0.005, 0.001};
  std::string noise = "white";
  double alpha = 1.0;
  std::string basis = "svd";
  std::string methods = "frmod,tikhonov,shiftk,tsvd";
  std::size_t runs = 1000;
  double eta = 1.0;
  std::uint64_t seed = 0;
  std::string mode = "discrepancy";
  std::string format = "csv";
  std::string out;
  std::size_t threads = 1;
  std::string config;
};

struct PropsArgs {
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  std::size_t n = 30;
  std::string out;
};

struct FiltersArgs {
  std::string problem = "phillips";
  std::size_t n = 200;
  std::optional<double> mu;
  std::optional<std::size_t> k;
  std::string methods = "tsvd,tikhonov,frmod,shiftk,cutk,scaled,scaledk";
  std::string out;
};

struct ProblemArgs {
  std::string problem = "phillips";
  std::size_t n = 200;
  std::string prefix;
};

// Fills every bench option that was not given on the command line from a
// flat `key = value` file whose keys are the long flag names.
void apply_config_file(CLI::App& bench, const std::string& path) {
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_file(path);
  } catch (const CLI::Error& e) {
    throw UsageError("cannot read config file '" + path + "': " + e.what());
  }
  for (const CLI::ConfigItem& item : items) {
    if (!item.parents.empty()) throw UsageError("config file sections are not supported");
    if (item.name == "config") throw UsageError("config files cannot include other config files");
    CLI::Option* opt = bench.get_option_no_throw("--" + item.name);
    if (opt == nullptr) throw UsageError("unknown config key '" + item.name + "'");
    if (opt->count() > 0) continue;
    // The INI reader splits comma lists; single-valued options such as
    // --methods take the list back as one string.
    std::vector<std::string> inputs = item.inputs;
    if (inputs.size() > 1 && opt->get_items_expected_max() == 1) {
      std::string joined = inputs.front();
      for (std::size_t i = 1; i < inputs.size(); ++i) joined += "," + inputs[i];
      inputs = {joined};
    }
    try {
      opt->add_result(inputs);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw UsageError("config key '" + item.name + "': " + e.what());
    }
  }
}

ExperimentConfig to_config(const BenchArgs& a) {
  ExperimentConfig c;
  c.problem = parse_problem_kind(a.problem);
  c.n = a.n;
  c.levels = a.levels;
  c.noise = parse_noise_kind(a.noise);
  c.alpha = a.alpha;
  c.basis = parse_noise_basis(a.basis);
  c.methods = parse_method_list(a.methods);
  c.runs = a.runs;
  c.eta = a.eta;
  c.seed = a.seed;
  c.mode = parse_experiment_mode(a.mode);
  c.threads = a.threads;
  validate(c);
  return c;
}

// Writes to the file at `path`, or to `fallback` when the path is empty.
template <class Fn>
void with_output(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty()) {
    fn(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) fail(ErrorCode::InvalidArgument, "cannot open '" + path + "' for writing");
  fn(file);
  if (!file) fail(ErrorCode::InvalidArgument, "failed writing '" + path + "'");
}

int run_bench(const BenchArgs& a, std::ostream& out) {
  const ExperimentConfig config = to_config(a);
  const ReportFormat format = parse_report_format(a.format);
  const ExperimentReport report = run_experiment(config);
  with_output(a.out, out, [&](std::ostream& s) { emit_report(s, report, format); });
  return 0;
}

int run_props(const PropsArgs& a, std::ostream& out) {
  const PropositionSuiteResult result = verify_random_spectra(a.seed, a.trials, a.n);
  with_output(a.out, out, [&](std::ostream& s) { write_suite_summary(s, result); });
  return result.all_passed() ? 0 : kExitRuntime;
}

int run_filters(const FiltersArgs& a, std::ostream& out) {
  const std::vector<MethodFamily> families = parse_method_list(a.methods);
  const bool needs_mu = std::any_of(families.begin(), families.end(),
                                    [](const MethodFamily& f) { return f.uses_mu(); });
  if (needs_mu && !a.mu) throw UsageError("--mu is required for the requested methods");
  const TestProblem problem = make_problem(parse_problem_kind(a.problem), a.n);
  const SvdFactorization f = svd(problem.A);
  const std::size_t rank = numerical_rank(f.sigma);

  std::vector<RegMethod> methods;
  std::vector<std::string> names;
  for (const MethodFamily& family : families) {
    if (family.uses_mu()) {
      methods.push_back(family.with_mu(*a.mu));
    } else {
      if (!a.k && !a.mu) throw UsageError("tsvd needs --k or --mu");
      methods.push_back(RegMethod::tsvd(a.k ? *a.k : cut_index(f.sigma, *a.mu)));
    }
    validate(methods.back(), f.sigma.size());
    names.push_back(family.name());
  }
  with_output(a.out, out, [&](std::ostream& s) {
    write_filter_factor_csv(s, f.sigma, rank, methods, names);
  });
  return 0;
}

int run_problem(const ProblemArgs& a) {
  const TestProblem p = make_problem(parse_problem_kind(a.problem), a.n);
  write_matrix_file(a.prefix + "_A.txt", p.A);
  write_matrix_file(a.prefix + "_x.txt", p.x_true);
  write_matrix_file(a.prefix + "_b.txt", p.b_true);
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regularized least-squares toolkit for discrete ill-posed problems", "tikreg"};
  app.require_subcommand(1);

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "Monte-Carlo error benchmark");
  bench->add_option("--problem", bench_args.problem, "phillips|shaw|deriv2|heat");
  bench->add_option("--n", bench_args.n, "Problem size");
  bench->add_option("--noise-levels", bench_args.levels, "Comma-separated relative noise levels")
      ->delimiter(',');
  bench->add_option("--noise", bench_args.noise, "white|colored");
  bench->add_option("--alpha", bench_args.alpha, "Colored-noise exponent");
  bench->add_option("--basis", bench_args.basis, "svd|randorth|dct");
  bench->add_option("--methods", bench_args.methods,
                    "Comma list of tsvd,tikhonov,frmod,shiftk,cutk,scaled,scaledk,theta:<v>");
  bench->add_option("--runs", bench_args.runs, "Trials per noise level");
  bench->add_option("--eta", bench_args.eta, "Discrepancy safety factor (>= 1)");
  bench->add_option("--seed", bench_args.seed, "Master seed");
  bench->add_option("--mode", bench_args.mode, "discrepancy|optimal");
  bench->add_option("--format", bench_args.format, "csv|md");
  bench->add_option("--out", bench_args.out, "Output path (default stdout)");
  bench->add_option("--threads", bench_args.threads, "Worker threads, 0 = all cores");
  bench->add_option("--config", bench_args.config, "key = value file; flags override it");

  PropsArgs props_args;
  CLI::App* props = app.add_subcommand("props", "Check the regularization-matrix claims on random spectra");
  props->add_option("--seed", props_args.seed, "Seed");
  props->add_option("--trials", props_args.trials, "Number of random spectra");
  props->add_option("--n", props_args.n, "Spectrum length");
  props->add_option("--out", props_args.out, "Output path (default stdout)");

  FiltersArgs filters_args;
  CLI::App* filters = app.add_subcommand("filters", "Dump filter factors for a test problem");
  filters->add_option("--problem", filters_args.problem, "phillips|shaw|deriv2|heat");
  filters->add_option("--n", filters_args.n, "Problem size");
  filters->add_option("--mu", filters_args.mu, "Regularization parameter");
  filters->add_option("--k", filters_args.k, "Truncation index for tsvd");
  filters->add_option("--methods", filters_args.methods, "Comma-separated methods");
  filters->add_option("--out", filters_args.out, "Output path (default stdout)");

  ProblemArgs problem_args;
  CLI::App* problem = app.add_subcommand("problem", "Export a test problem as text matrices");
  problem->add_option("--problem", problem_args.problem, "phillips|shaw|deriv2|heat");
  problem->add_option("--n", problem_args.n, "Problem size");
  problem->add_option("--prefix", problem_args.prefix, "Writes <prefix>_A.txt, _x.txt, _b.txt")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (bench->parsed()) {
      if (!bench_args.config.empty()) apply_config_file(*bench, bench_args.config);
      return run_bench(bench_args, out);
    }
    if (props->parsed()) return run_props(props_args, out);
    if (filters->parsed()) return run_filters(filters_args, out);
    return run_problem(problem_args);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::InvalidArgument ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace tikreg
