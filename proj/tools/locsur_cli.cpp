// Command-line entry point for the experiment harness. One subcommand per
// experiment; every run reads an optional JSON config, writes its outputs
// into --out, and prints a short digest of the summary.
//
// Exit codes: 0 success, 2 configuration error (bad flags, unreadable or
// invalid config), 3 runtime failure.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include "locsur/harness.hpp"

namespace {

locsur::Json load_config(const std::string& path) {
  if (path.empty()) return locsur::Json::object();
  try {
    return locsur::read_json_file(path);
  } catch (const std::exception& e) {
    throw locsur::ConfigError(std::string("cannot read config: ") + e.what());
  }
}

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void add_common(CLI::App* sub, CommonArgs& args, const std::string& default_out) {
  args.out_dir = default_out;
  sub->add_option("--config", args.config_path, "JSON config file (defaults used when absent)");
  sub->add_option("--out", args.out_dir, "output directory")->capture_default_str();
  sub->add_option("--seed", args.seed, "master seed override")
      ->each([&args](const std::string&) { args.seed_set = true; });
}

void print_kv(const char* key, const locsur::Json& v) {
  std::printf("  %-24s %s\n", key, v.dump().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"local Fourier surrogation experiments for reuploading models"};
  app.require_subcommand(1);

  CommonArgs a1, a2, a3, a4, a5;
  std::string wdbc_path;

  CLI::App* s1 = app.add_subcommand("sweep1d", "window sweep on the 1-feature series target");
  add_common(s1, a1, "out/sweep1d");
  CLI::App* s2 = app.add_subcommand("patch2d_demo", "train and surrogate one 2-feature patch");
  add_common(s2, a2, "out/patch2d_demo");
  CLI::App* s3 = app.add_subcommand("sweep2d_suite", "patch-size sweep over the 2-feature suite");
  add_common(s3, a3, "out/sweep2d_suite");
  CLI::App* s4 = app.add_subcommand("qsvm_demo", "surrogate a kernel SVM's calibrated score");
  add_common(s4, a4, "out/qsvm_demo");
  CLI::App* s5 = app.add_subcommand("wdbc_limits", "practical-limits study on diagnostic data");
  add_common(s5, a5, "out/wdbc_limits");
  s5->add_option("--wdbc", wdbc_path, "path to the diagnostic data file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (s1->parsed()) {
      locsur::Sweep1dConfig cfg = locsur::Sweep1dConfig::from_json(load_config(a1.config_path));
      if (a1.seed_set) cfg.seed = a1.seed;
      const auto res = locsur::run_sweep1d(cfg, a1.out_dir);
      std::printf("sweep1d: %zu rows -> %s\n", res.rows.size(), a1.out_dir.c_str());
      for (const auto& st : res.stats)
        std::printf("  qubits=%d r2_first=%.4f r2_last=%.4f trend=%s\n", st.qubits, st.r2_first,
                    st.r2_last, st.locality_trend ? "yes" : "no");
    } else if (s2->parsed()) {
      locsur::Patch2dConfig cfg = locsur::Patch2dConfig::from_json(load_config(a2.config_path));
      if (a2.seed_set) cfg.seed = a2.seed;
      const auto res = locsur::run_patch2d_demo(cfg, a2.out_dir);
      std::printf("patch2d_demo: %zu rows -> %s\n", res.rows.size(), a2.out_dir.c_str());
      print_kv("r2_q_t_train", res.summary.at("r2_q_t_train"));
      print_kv("r2_q_t_fit", res.summary.at("r2_q_t_fit"));
      print_kv("r2_c_q", res.summary.at("r2_c_q"));
      print_kv("node_queries", res.summary.at("node_queries"));
    } else if (s3->parsed()) {
      locsur::Sweep2dConfig cfg = locsur::Sweep2dConfig::from_json(load_config(a3.config_path));
      if (a3.seed_set) cfg.seed = a3.seed;
      const auto res = locsur::run_sweep2d_suite(cfg, a3.out_dir);
      std::printf("sweep2d_suite: %zu rows -> %s\n", res.rows.size(), a3.out_dir.c_str());
      std::printf("  decreasing trend: %d of %zu targets\n", res.n_decreasing,
                  res.trends.size());
      print_kv("min_r2_c_q", res.summary.at("min_r2_c_q"));
      std::printf("  exact fit failures: %d, separable fit failures: %d\n",
                  res.exact_fit_failures, res.separable_failures);
    } else if (s4->parsed()) {
      locsur::QsvmConfig cfg = locsur::QsvmConfig::from_json(load_config(a4.config_path));
      if (a4.seed_set) cfg.seed = a4.seed;
      const auto res = locsur::run_qsvm_demo(cfg, a4.out_dir);
      std::printf("qsvm_demo: %zu rows -> %s\n", res.rows.size(), a4.out_dir.c_str());
      std::printf("  training_accuracy       %.4f\n", res.training_accuracy);
      print_kv("focal_r2_q_t", res.summary.at("focal").at("r2_q_t"));
      print_kv("min_r2_c_q", res.summary.at("min_r2_c_q"));
    } else if (s5->parsed()) {
      locsur::WdbcConfig cfg = locsur::WdbcConfig::from_json(load_config(a5.config_path));
      if (a5.seed_set) cfg.seed = a5.seed;
      if (!wdbc_path.empty()) cfg.wdbc_path = wdbc_path;
      const auto res = locsur::run_wdbc_limits(cfg, a5.out_dir);
      std::printf("wdbc_limits: %zu rows -> %s\n", res.rows.size(), a5.out_dir.c_str());
      std::printf("  solvable radii: %d, underdetermined: %d\n", res.n_solvable,
                  res.n_underdetermined);
      print_kv("min_r2_c_q_solvable", res.summary.at("min_r2_c_q_solvable"));
      print_kv("full_lattice_floor", res.summary.at("full_lattice_floor"));
    }
  } catch (const locsur::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
