// Command-line front end: per-file noise estimation, iterative order/jump
// selection, the DER_SNR-compatible defaults, and the synthetic benchmark
// tables.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <future>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "betasigma/betasigma.hpp"

namespace {

using namespace betasigma;

unsigned max_threads() {
  if (const char* env = std::getenv("BETASIGMA_THREADS")) {
    const long value = std::strtol(env, nullptr, 10);
    if (value >= 1) return static_cast<unsigned>(value);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

struct FileOutcome {
  std::string out;      // goes to stdout in argument order
  std::string err;      // goes to stderr in argument order
  bool failed = false;
  bool non_converged = false;
};

/// Runs `work` over all files with at most max_threads() in flight and
/// results reported in argument order.
template <typename Work>
std::vector<FileOutcome> for_each_file(const std::vector<std::string>& files, Work work) {
  std::vector<FileOutcome> outcomes(files.size());
  const unsigned threads = std::min<unsigned>(max_threads(), files.size() > 0 ? files.size() : 1);
  if (threads <= 1) {
    for (std::size_t i = 0; i < files.size(); ++i) outcomes[i] = work(files[i]);
    return outcomes;
  }
  std::size_t next = 0;
  while (next < files.size()) {
    const std::size_t batch = std::min<std::size_t>(threads, files.size() - next);
    std::vector<std::future<FileOutcome>> inflight;
    inflight.reserve(batch);
    for (std::size_t k = 0; k < batch; ++k)
      inflight.push_back(std::async(std::launch::async, work, files[next + k]));
    for (std::size_t k = 0; k < batch; ++k) outcomes[next + k] = inflight[k].get();
    next += batch;
  }
  return outcomes;
}

int flush_outcomes(const std::vector<FileOutcome>& outcomes, const std::string& header = "") {
  bool any_failed = false;
  bool any_non_converged = false;
  bool header_pending = !header.empty();
  for (const FileOutcome& o : outcomes) {
    if (header_pending && !o.out.empty()) {
      std::fputs(header.c_str(), stdout);
      header_pending = false;
    }
    std::fputs(o.out.c_str(), stdout);
    std::fputs(o.err.c_str(), stderr);
    any_failed |= o.failed;
    any_non_converged |= o.non_converged;
  }
  if (any_failed) return 2;
  if (any_non_converged) return 3;
  return 0;
}

std::string tsv_header_line() {
  return "sigma_hat\tstderr\testimator\torder\tjump\tmode\tn_beta\tflags\tsnr\n";
}

SampleMode parse_mode(const std::string& s) {
  return s == "independent" ? SampleMode::Independent : SampleMode::Shifted;
}

Sampling parse_sampling(const std::string& s) {
  return s == "positions" ? Sampling::UsePositions : Sampling::AssumeEquidistant;
}

Estimator parse_estimator(const std::string& estimator, const std::string& center) {
  if (estimator == "mv") return center == "sample" ? Estimator::MVMean : Estimator::MV;
  return center == "sample" ? Estimator::RobustMedianCentered : Estimator::Robust;
}

OutputFormat parse_format(const std::string& s) {
  return s == "tsv" ? OutputFormat::Tsv : OutputFormat::Json;
}

std::optional<double> snr_of(const SeriesData& data, double sigma_hat) {
  if (sigma_hat <= 0.0) return std::nullopt;
  return detail::median(data.y) / sigma_hat;
}

void warn_about_ingest(const std::string& path, const IngestReport& report, Sampling sampling,
                       std::string& err) {
  if (report.rows_dropped > 0)
    err += "betasigma: " + path + ": dropped " + std::to_string(report.rows_dropped) +
           " unusable row(s)\n";
  if (report.inferred_sampling == InferredSampling::Irregular &&
      sampling == Sampling::AssumeEquidistant)
    err += "betasigma: " + path +
           ": sampling looks irregular; consider --sampling positions\n";
}

struct EstimateArgs {
  std::vector<std::string> files;
  int order = 1;
  int jump = 2;
  std::string mode = "shifted";
  std::string estimator = "robust";
  std::string center = "zero";
  std::string sampling = "equidistant";
  std::string format = "json";
};

int run_estimate(const EstimateArgs& args) {
  const OutputFormat format = parse_format(args.format);
  auto work = [&](const std::string& path) {
    FileOutcome outcome;
    try {
      const auto [data, report] = read_series(path);
      warn_about_ingest(path, report, parse_sampling(args.sampling), outcome.err);
      EstimateOptions opt;
      opt.order = args.order;
      opt.jump = args.jump;
      opt.mode = parse_mode(args.mode);
      opt.estimator = parse_estimator(args.estimator, args.center);
      opt.sampling = parse_sampling(args.sampling);
      const NoiseEstimate est = estimate_noise(data, opt);
      ResultOptions ropt;
      ropt.snr = snr_of(data, est.sigma_hat);
      ropt.tsv_header = false;
      outcome.out = write_result(est, format, ropt);
    } catch (const Error& e) {
      outcome.err += "betasigma: " + path + ": " + e.what() + "\n";
      outcome.failed = true;
    }
    return outcome;
  };
  return flush_outcomes(for_each_file(args.files, work),
                        format == OutputFormat::Tsv ? tsv_header_line() : "");
}

struct AutoArgs {
  std::vector<std::string> files;
  int start_order = 0;
  int start_jump = 1;
  double sigmas = 3.0;
  int max_order = 10;
  std::string mode = "independent";
  std::string estimator = "robust";
  std::string sampling = "equidistant";
  std::string format = "json";
  bool verbose = false;
};

int run_auto(const AutoArgs& args) {
  const OutputFormat format = parse_format(args.format);
  auto work = [&](const std::string& path) {
    FileOutcome outcome;
    try {
      const auto [data, report] = read_series(path);
      warn_about_ingest(path, report, parse_sampling(args.sampling), outcome.err);
      AutoSelectConfig cfg;
      cfg.start_order = args.start_order;
      cfg.start_jump = args.start_jump;
      cfg.consistency_sigmas = args.sigmas;
      cfg.max_order = args.max_order;
      cfg.mode = parse_mode(args.mode);
      cfg.estimator = parse_estimator(args.estimator, "zero");
      cfg.sampling = parse_sampling(args.sampling);
      const AutoSelectResult result = auto_select(data, cfg);
      ResultOptions ropt;
      ropt.snr = snr_of(data, result.final.sigma_hat);
      ropt.include_trace = args.verbose;
      ropt.tsv_header = false;
      outcome.out = write_result(result, format, ropt);
      if (args.verbose && format == OutputFormat::Tsv)
        for (const AutoTraceEntry& entry : result.trace)
          outcome.err += "betasigma: " + path + ": N=" + std::to_string(entry.order) +
                         " j=" + std::to_string(entry.jump) + " sigma=" +
                         detail::fmt9(entry.base.sigma_hat) + " +- " +
                         detail::fmt9(entry.base.std_error) + " -> " +
                         decision_name(entry.decision) + "\n";
      if (!result.converged) {
        outcome.err += "betasigma: " + path + ": no convergence up to order " +
                       std::to_string(args.max_order) + "\n";
        outcome.non_converged = true;
      }
    } catch (const Error& e) {
      outcome.err += "betasigma: " + path + ": " + e.what() + "\n";
      outcome.failed = true;
    }
    return outcome;
  };
  return flush_outcomes(for_each_file(args.files, work),
                        format == OutputFormat::Tsv ? tsv_header_line() : "");
}

struct ReproduceArgs {
  std::string table;
  std::size_t reps = 0;  // 0 = per-table default
  std::uint64_t seed = 1;
};

void print_table2(std::size_t reps, std::uint64_t seed) {
  const std::vector<int> orders{0, 1, 2, 3, 4};
  const auto corr = order_correlation_matrix(1000, orders, reps, seed);
  std::printf("# order correlation of variance estimates (shifted subsets)\n");
  std::printf("# n=1000 reps=%zu seed=%llu\n", reps, static_cast<unsigned long long>(seed));
  std::printf("N");
  for (int o : orders) std::printf("\t%d", o);
  std::printf("\n");
  for (std::size_t a = 0; a < orders.size(); ++a) {
    std::printf("%d", orders[a]);
    for (std::size_t b = 0; b < orders.size(); ++b) {
      if (b < a)
        std::printf("\t-");
      else
        std::printf("\t%.3f", corr[a][b]);
    }
    std::printf("\n");
  }
}

void print_table3(std::size_t reps, std::uint64_t seed) {
  const std::vector<double> ratios{200.0, 100.0, 50.0, 25.0, 12.5, 10.0, 9.0, 8.0, 7.0, 6.0};
  const std::vector<int> orders{0, 1, 2, 3, 4, 5};
  const SineBenchmark bench;
  const DeviationReport report = sine_deviation_table(ratios, orders, reps, seed, bench);
  std::printf("# sine benchmark: mean relative deviation d = (s_E - sigma0) / se\n");
  std::printf("# n=%zu dt=%g sigma0=%g amplitude=%g reps=%zu seed=%llu\n", bench.n_points,
              bench.delta_t, bench.sigma0, bench.amplitude, reps,
              static_cast<unsigned long long>(seed));
  std::printf("# cells with |d| >= 2 (inconsistent with the input) are marked *\n");
  std::printf("P/dt");
  for (int o : orders) std::printf("\tN=%d", o);
  std::printf("\n");
  for (std::size_t r = 0; r < ratios.size(); ++r) {
    std::printf("%.1f", ratios[r]);
    for (std::size_t c = 0; c < orders.size(); ++c) {
      const double d = report.deviation[r][c];
      std::printf("\t%.2f%s", d, std::abs(d) >= 2.0 ? "*" : "");
    }
    std::printf("\n");
  }
}

void print_fig1() {
  std::vector<int> orders;
  for (int n = 0; n <= 10; ++n) orders.push_back(n);
  const auto curve = efficiency_curve(orders, 1000);
  std::printf("# variance efficiency relative to the shifted order-zero reference\n");
  std::printf("N\tshifted\tindependent\n");
  for (const EfficiencyPoint& p : curve)
    std::printf("%d\t%.6f\t%.6f\n", p.order, p.shifted, p.independent);
}

void print_pathological() {
  std::printf("# alternating series y_i = (-1)^i, noise-free\n");
  std::printf("N\t|beta|\tgrowth\tanalytic_growth\n");
  const SeriesData small = pathological_series(64);
  double previous = 0.0;
  for (int order = 0; order <= 10; ++order) {
    const BetaSample sample =
        build_beta(small, shifted_scheme(small.size(), order, 1), Sampling::AssumeEquidistant);
    const double magnitude = std::abs(sample.values.front());
    if (order == 0)
      std::printf("%d\t%.12f\t-\t-\n", order, magnitude);
    else
      std::printf("%d\t%.12f\t%.9f\t%.9f\n", order, magnitude, magnitude / previous,
                  std::sqrt((2.0 * order + 2.0) / (2.0 * order + 1.0)));
    previous = magnitude;
  }
  const BetaSample even =
      build_beta(small, shifted_scheme(small.size(), 1, 2), Sampling::AssumeEquidistant);
  double max_even = 0.0;
  for (double b : even.values) max_even = std::max(max_even, std::abs(b));
  std::printf("# even jump (j=2): max|beta| = %g\n", max_even);

  AutoSelectConfig cfg;
  cfg.estimator = Estimator::MV;
  cfg.mode = SampleMode::Independent;
  const AutoSelectResult result = auto_select(pathological_series(1000000), cfg);
  std::printf("# auto-select: converged=%s order=%d jump=%d sigma=%s\n",
              result.converged ? "true" : "false", result.order, result.jump,
              detail::fmt9(result.final.sigma_hat).c_str());
}

int run_reproduce(const ReproduceArgs& args) {
  if (args.table == "2") {
    print_table2(args.reps ? args.reps : 5000, args.seed);
  } else if (args.table == "3") {
    print_table3(args.reps ? args.reps : 200, args.seed);
  } else if (args.table == "fig1") {
    print_fig1();
  } else {
    print_pathological();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"a posteriori noise estimation for sampled data series"};
  app.require_subcommand(1);

  EstimateArgs est;
  CLI::App* cmd_est = app.add_subcommand("estimate", "estimate the noise scale of each file");
  cmd_est->add_option("files", est.files, "input column data files")->required();
  cmd_est->add_option("--order", est.order, "annihilation order N; subsets hold N+2 points")
      ->capture_default_str();
  cmd_est->add_option("--jump", est.jump, "index stride inside each subset")->capture_default_str();
  cmd_est->add_option("--mode", est.mode, "subset construction")
      ->check(CLI::IsMember({"independent", "shifted"}))
      ->capture_default_str();
  cmd_est->add_option("--estimator", est.estimator, "scale estimator")
      ->check(CLI::IsMember({"mv", "robust"}))
      ->capture_default_str();
  cmd_est->add_option("--center", est.center, "centering convention")
      ->check(CLI::IsMember({"zero", "sample"}))
      ->capture_default_str();
  cmd_est->add_option("--sampling", est.sampling, "coefficient source")
      ->check(CLI::IsMember({"equidistant", "positions"}))
      ->capture_default_str();
  cmd_est->add_option("--format", est.format, "output format")
      ->check(CLI::IsMember({"json", "tsv"}))
      ->capture_default_str();

  AutoArgs aut;
  CLI::App* cmd_aut =
      app.add_subcommand("auto", "select order and jump iteratively, then estimate");
  cmd_aut->add_option("files", aut.files, "input column data files")->required();
  cmd_aut->add_option("--start-order", aut.start_order, "initial order")->capture_default_str();
  cmd_aut->add_option("--start-jump", aut.start_jump, "initial jump")->capture_default_str();
  cmd_aut->add_option("--sigmas", aut.sigmas, "width of the consistency intervals")
      ->capture_default_str();
  cmd_aut->add_option("--max-order", aut.max_order, "order cap before giving up")
      ->capture_default_str();
  cmd_aut->add_option("--mode", aut.mode, "subset construction")
      ->check(CLI::IsMember({"independent", "shifted"}))
      ->capture_default_str();
  cmd_aut->add_option("--estimator", aut.estimator, "scale estimator")
      ->check(CLI::IsMember({"mv", "robust"}))
      ->capture_default_str();
  cmd_aut->add_option("--sampling", aut.sampling, "coefficient source")
      ->check(CLI::IsMember({"equidistant", "positions"}))
      ->capture_default_str();
  cmd_aut->add_option("--format", aut.format, "output format")
      ->check(CLI::IsMember({"json", "tsv"}))
      ->capture_default_str();
  cmd_aut->add_flag("--verbose", aut.verbose, "emit the iteration trace");

  ReproduceArgs rep;
  CLI::App* cmd_rep = app.add_subcommand("reproduce", "run the synthetic benchmark tables");
  cmd_rep->add_option("--table", rep.table, "which benchmark to run")
      ->check(CLI::IsMember({"2", "3", "fig1", "pathological"}))
      ->required();
  cmd_rep->add_option("--reps", rep.reps, "repetitions (0 = table default)");
  cmd_rep->add_option("--seed", rep.seed, "base random seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_est->parsed()) return run_estimate(est);
    if (cmd_aut->parsed()) return run_auto(aut);
    return run_reproduce(rep);
  } catch (const betasigma::Error& e) {
    std::fprintf(stderr, "betasigma: %s\n", e.what());
    return 2;
  }
}
