#pragma once

// Experiment harness: configuration structs, runners, and file emitters for
// the five canned experiments exposed by the CLI. Each runner derives one
// seed per cell from the master seed, so results are independent of
// execution order, and writes four files into its output directory:
//   config.json   resolved configuration echo
//   sweep.csv     one row per (model, region) cell
//   loss_traces.csv  per-step training MSE keyed by sweep row id
//   summary.json  aggregates plus wall-clock timings
// CSV content is a pure function of the config; wall times live only in
// summary.json so reruns produce byte-identical CSVs.

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "locsur/dataprep.hpp"
#include "locsur/io.hpp"
#include "locsur/metrics.hpp"
#include "locsur/optim.hpp"
#include "locsur/qsvm.hpp"
#include "locsur/regions.hpp"
#include "locsur/reupload.hpp"
#include "locsur/rng.hpp"
#include "locsur/surrogate.hpp"
#include "locsur/targets.hpp"

namespace locsur {

// Bad or contradictory configuration. The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// Reads known keys out of a JSON object and rejects everything else, so a
// typo in a config file fails loudly instead of silently using a default.
class ConfigReader {
 public:
  ConfigReader(const Json& j, std::string context)
      : j_(j), context_(std::move(context)) {
    if (!j_.is_object()) throw ConfigError(context_ + ": config must be a JSON object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    known_.push_back(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const Json::exception&) {
      throw ConfigError(context_ + ": bad value for key '" + std::string(key) + "'");
    }
  }

  // Accepts either an integer batch size or the string "full".
  void get_batch(const char* key, int& out) {
    known_.push_back(key);
    if (!j_.contains(key)) return;
    const Json& v = j_.at(key);
    if (v.is_string()) {
      if (v.get<std::string>() != "full")
        throw ConfigError(context_ + ": batch_size string must be \"full\"");
      out = kFullBatch;
      return;
    }
    try {
      out = v.get<int>();
    } catch (const Json::exception&) {
      throw ConfigError(context_ + ": bad value for key '" + std::string(key) + "'");
    }
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (std::find(known_.begin(), known_.end(), item.key()) == known_.end())
        throw ConfigError(context_ + ": unknown config key '" + item.key() + "'");
    }
  }

 private:
  const Json& j_;
  std::string context_;
  std::vector<std::string> known_;
};

// "experiment" may appear in config files for self-documentation; when it
// does it must match the subcommand being run.
inline void check_experiment_tag(ConfigReader& r, const std::string& expected) {
  std::string tag = expected;
  r.get("experiment", tag);
  if (tag != expected)
    throw ConfigError("config is for experiment '" + tag + "', expected '" + expected + "'");
}

inline double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median: empty range");
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Sweep rows and the shared output files.

struct SweepRow {
  std::string experiment;
  std::string target;
  int qubits = 0;
  int layers = 0;
  std::string region_kind;
  std::string region_size;  // preformatted: width, edge, radius, or half-width
  std::optional<double> r2_q_t;
  std::optional<double> r2_c_t;
  std::optional<double> r2_c_q;
  std::optional<double> mse;
  std::int64_t quantum_calls = 0;
  std::uint64_t seed = 0;
};

// Per-step full-data training MSE for one sweep row. Step 0 is the loss at
// the initial parameters, before the first update.
struct LossTrace {
  std::int64_t row_id = 0;
  double initial_loss = 0.0;
  std::vector<double> losses;
};

namespace detail {

inline std::string opt_cell(const std::optional<double>& v) {
  return v ? fmt_double(*v) : std::string();
}

inline void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  CsvWriter w(path, {"experiment", "target", "qubits", "layers", "region_kind", "region_size",
                     "r2_q_t", "r2_c_t", "r2_c_q", "mse", "quantum_calls", "seed", "wall_ms"});
  for (const SweepRow& r : rows) {
    w.write_row({r.experiment, r.target, CsvWriter::cell(r.qubits), CsvWriter::cell(r.layers),
                 r.region_kind, r.region_size, opt_cell(r.r2_q_t), opt_cell(r.r2_c_t),
                 opt_cell(r.r2_c_q), opt_cell(r.mse), CsvWriter::cell(r.quantum_calls),
                 CsvWriter::cell(r.seed), "0"});
  }
}

inline void write_traces_csv(const std::filesystem::path& path,
                             const std::vector<LossTrace>& traces) {
  CsvWriter w(path, {"row_id", "step", "mse"});
  for (const LossTrace& t : traces) {
    w.write_row({CsvWriter::cell(t.row_id), "0", fmt_double(t.initial_loss)});
    for (size_t s = 0; s < t.losses.size(); ++s) {
      w.write_row({CsvWriter::cell(t.row_id), CsvWriter::cell(static_cast<std::int64_t>(s + 1)),
                   fmt_double(t.losses[s])});
    }
  }
}

inline void ensure_out_dir(const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec && !std::filesystem::is_directory(out_dir))
    throw std::runtime_error("cannot create output directory " + out_dir.string());
}

inline std::optional<double> r2_opt(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat) {
  return r_squared(y, yhat);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Experiment 1: single-feature window sweep against the fixed band-limited
// target, one sweep per qubit count.

struct Sweep1dConfig {
  std::vector<int> qubit_counts{1, 2, 3};
  int layers = 1;
  double domain_lo = -6.0;
  double domain_hi = 6.0;
  int samples_per_unit = 10;
  double window_start = 0.5;
  double window_increment = 0.2;
  std::string optimizer = "adam";
  int steps = 60;
  double learning_rate = 0.3;
  int batch_size = 25;
  // Wide initialization: narrow-window fits with several qubits stall near
  // zero when every angle starts at ~1e-2 (all-frequency components enter
  // with near-zero amplitude), so the sweep starts from sigma 0.5.
  double init_sigma = 0.5;
  std::uint64_t seed = 5;

  Json to_json() const {
    Json j;
    j["experiment"] = "sweep1d";
    j["qubit_counts"] = qubit_counts;
    j["layers"] = layers;
    j["domain_lo"] = domain_lo;
    j["domain_hi"] = domain_hi;
    j["samples_per_unit"] = samples_per_unit;
    j["window_start"] = window_start;
    j["window_increment"] = window_increment;
    j["optimizer"] = optimizer;
    j["steps"] = steps;
    j["learning_rate"] = learning_rate;
    j["batch_size"] = batch_size;
    j["init_sigma"] = init_sigma;
    j["seed"] = seed;
    return j;
  }

  static Sweep1dConfig from_json(const Json& j) {
    Sweep1dConfig c;
    detail::ConfigReader r(j, "sweep1d");
    detail::check_experiment_tag(r, "sweep1d");
    r.get("qubit_counts", c.qubit_counts);
    r.get("layers", c.layers);
    r.get("domain_lo", c.domain_lo);
    r.get("domain_hi", c.domain_hi);
    r.get("samples_per_unit", c.samples_per_unit);
    r.get("window_start", c.window_start);
    r.get("window_increment", c.window_increment);
    r.get("optimizer", c.optimizer);
    r.get("steps", c.steps);
    r.get("learning_rate", c.learning_rate);
    r.get_batch("batch_size", c.batch_size);
    r.get("init_sigma", c.init_sigma);
    r.get("seed", c.seed);
    r.finish();
    if (c.qubit_counts.empty()) throw ConfigError("sweep1d: qubit_counts must be non-empty");
    if (c.domain_hi <= c.domain_lo) throw ConfigError("sweep1d: domain_hi must exceed domain_lo");
    if (c.samples_per_unit < 1) throw ConfigError("sweep1d: samples_per_unit must be >= 1");
    if (c.window_start <= 0 || c.window_increment <= 0)
      throw ConfigError("sweep1d: window_start and window_increment must be positive");
    return c;
  }
};

struct QubitSweepStats {
  int qubits = 0;
  double r2_first = 0.0;
  double r2_last = 0.0;
  double median_first_quartile = 0.0;
  double median_last_quartile = 0.0;
  bool locality_trend = false;  // first beats last, and so do the quartile medians
};

struct Sweep1dResult {
  std::vector<SweepRow> rows;
  std::vector<LossTrace> traces;
  std::vector<QubitSweepStats> stats;
  std::vector<double> window_widths;
  Json summary;
};

inline Sweep1dResult run_sweep1d(const Sweep1dConfig& cfg, const std::filesystem::path& out_dir) {
  detail::ensure_out_dir(out_dir);
  write_json_file(out_dir / "config.json", cfg.to_json());
  detail::Stopwatch total;

  const double span = cfg.domain_hi - cfg.domain_lo;
  const int n_points = static_cast<int>(std::llround(span * cfg.samples_per_unit));
  AxisSpec axis{cfg.domain_lo, cfg.domain_hi, n_points, /*endpoint=*/false};
  const GridSamples data = grid_sample_1d(&fourier1d_target, axis);

  const std::vector<Interval1D> windows =
      sweep_intervals(cfg.window_start, cfg.window_increment, cfg.domain_lo, cfg.domain_hi);
  const OptimizerKind opt = optimizer_from_name(cfg.optimizer);

  Sweep1dResult res;
  for (const Interval1D& w : windows) res.window_widths.push_back(w.width);

  for (size_t qi = 0; qi < cfg.qubit_counts.size(); ++qi) {
    const int q = cfg.qubit_counts[qi];
    std::vector<double> r2s;
    for (size_t wi = 0; wi < windows.size(); ++wi) {
      const std::uint64_t cell = static_cast<std::uint64_t>(qi) * windows.size() + wi;
      const std::uint64_t cell_seed = derive_seed(cfg.seed, cell);

      const auto idx = select(data.X, Region(windows[wi]));
      Eigen::MatrixXd Xw(static_cast<Eigen::Index>(idx.size()), 1);
      Eigen::VectorXd yw(static_cast<Eigen::Index>(idx.size()));
      for (size_t k = 0; k < idx.size(); ++k) {
        Xw(static_cast<Eigen::Index>(k), 0) = data.X(idx[k], 0);
        yw(static_cast<Eigen::Index>(k)) = data.y(idx[k]);
      }

      ReuploadModel model = make_model(AnsatzKind::Basic1D, cfg.layers, q, 1);
      Rng init_rng(derive_seed(cell_seed, 0));
      init_theta(model, init_rng, cfg.init_sigma);

      TrainConfig tc;
      tc.optimizer = opt;
      tc.steps = cfg.steps;
      tc.learning_rate = cfg.learning_rate;
      tc.batch_size = cfg.batch_size;
      tc.seed = derive_seed(cell_seed, 1);
      const TrainReport report = train(model, Xw, yw, tc);
      model.theta = report.final_theta;

      const Eigen::VectorXd fq = forward_many(model, Xw);
      const auto r2 = r_squared(yw, fq);

      SweepRow row;
      row.experiment = "sweep1d";
      row.target = "fourier1d";
      row.qubits = q;
      row.layers = cfg.layers;
      row.region_kind = "interval";
      row.region_size = fmt_double(windows[wi].width);
      row.r2_q_t = r2;
      row.mse = report.loss_trace.empty() ? report.initial_loss : report.loss_trace.back();
      row.quantum_calls = 0;
      row.seed = cell_seed;

      res.traces.push_back({static_cast<std::int64_t>(res.rows.size()), report.initial_loss,
                            report.loss_trace});
      res.rows.push_back(std::move(row));
      r2s.push_back(r2.value_or(0.0));
    }

    QubitSweepStats st;
    st.qubits = q;
    st.r2_first = r2s.front();
    st.r2_last = r2s.back();
    const size_t nq = std::max<size_t>(1, r2s.size() / 4);
    st.median_first_quartile = detail::median({r2s.begin(), r2s.begin() + nq});
    st.median_last_quartile = detail::median({r2s.end() - nq, r2s.end()});
    st.locality_trend = st.r2_first > st.r2_last &&
                        st.median_first_quartile > st.median_last_quartile;
    res.stats.push_back(st);
  }

  Json summary;
  summary["experiment"] = "sweep1d";
  summary["n_windows"] = windows.size();
  summary["n_samples"] = data.X.rows();
  Json per_qubit = Json::array();
  for (const QubitSweepStats& st : res.stats) {
    Json s;
    s["qubits"] = st.qubits;
    s["r2_first_window"] = st.r2_first;
    s["r2_last_window"] = st.r2_last;
    s["median_first_quartile"] = st.median_first_quartile;
    s["median_last_quartile"] = st.median_last_quartile;
    s["locality_trend"] = st.locality_trend;
    per_qubit.push_back(s);
  }
  summary["per_qubit"] = per_qubit;
  summary["wall_ms_total"] = total.ms();
  res.summary = summary;

  detail::write_sweep_csv(out_dir / "sweep.csv", res.rows);
  detail::write_traces_csv(out_dir / "loss_traces.csv", res.traces);
  write_json_file(out_dir / "summary.json", summary);
  return res;
}

// ---------------------------------------------------------------------------
// Experiment 2: train on one grid patch of a 2-feature target, surrogate an
// inner patch exactly, and emit dense evaluation grids for plotting.

struct Patch2dConfig {
  std::string target = "combined_osc";
  std::uint64_t target_seed = 1;  // only consulted by randomized targets
  int grid_points = 22;
  double domain_lo = -kPi;
  double domain_hi = kPi;
  int train_anchor_row = 2;
  int train_anchor_col = 2;
  int train_edge = 10;
  int fit_anchor_row = 3;
  int fit_anchor_col = 3;
  int fit_edge = 8;
  int layers = 2;
  std::string optimizer = "nelder_mead";
  int steps = 500;
  double init_sigma = 0.01;
  int eval_points = 39;  // dense plotting mesh per axis; 39^2 = 1521 cells
  std::uint64_t seed = 424243;

  Json to_json() const {
    Json j;
    j["experiment"] = "patch2d_demo";
    j["target"] = target;
    j["target_seed"] = target_seed;
    j["grid_points"] = grid_points;
    j["domain_lo"] = domain_lo;
    j["domain_hi"] = domain_hi;
    j["train_anchor_row"] = train_anchor_row;
    j["train_anchor_col"] = train_anchor_col;
    j["train_edge"] = train_edge;
    j["fit_anchor_row"] = fit_anchor_row;
    j["fit_anchor_col"] = fit_anchor_col;
    j["fit_edge"] = fit_edge;
    j["layers"] = layers;
    j["optimizer"] = optimizer;
    j["steps"] = steps;
    j["init_sigma"] = init_sigma;
    j["eval_points"] = eval_points;
    j["seed"] = seed;
    return j;
  }

  static Patch2dConfig from_json(const Json& j) {
    Patch2dConfig c;
    detail::ConfigReader r(j, "patch2d_demo");
    detail::check_experiment_tag(r, "patch2d_demo");
    r.get("target", c.target);
    r.get("target_seed", c.target_seed);
    r.get("grid_points", c.grid_points);
    r.get("domain_lo", c.domain_lo);
    r.get("domain_hi", c.domain_hi);
    r.get("train_anchor_row", c.train_anchor_row);
    r.get("train_anchor_col", c.train_anchor_col);
    r.get("train_edge", c.train_edge);
    r.get("fit_anchor_row", c.fit_anchor_row);
    r.get("fit_anchor_col", c.fit_anchor_col);
    r.get("fit_edge", c.fit_edge);
    r.get("layers", c.layers);
    r.get("optimizer", c.optimizer);
    r.get("steps", c.steps);
    r.get("init_sigma", c.init_sigma);
    r.get("eval_points", c.eval_points);
    r.get("seed", c.seed);
    r.finish();
    if (c.grid_points < 2) throw ConfigError("patch2d_demo: grid_points must be >= 2");
    if (c.eval_points < 2) throw ConfigError("patch2d_demo: eval_points must be >= 2");
    return c;
  }
};

struct Patch2dResult {
  std::vector<SweepRow> rows;
  std::vector<LossTrace> traces;
  std::optional<double> r2_q_t_train;
  std::optional<double> r2_q_t_fit;
  std::optional<double> r2_c_q;
  std::optional<double> r2_c_t;
  double fit_condition = 0.0;
  std::int64_t node_queries = 0;
  bool fit_failed = false;
  std::string fit_error;
  Json summary;
};

namespace detail {

// Rows of X whose indices land in `region`, gathered into dense matrices.
struct Gathered {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<Eigen::Index> idx;
};

inline Gathered gather(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Region& region) {
  Gathered g;
  g.idx = select(X, region);
  g.X.resize(static_cast<Eigen::Index>(g.idx.size()), X.cols());
  g.y.resize(static_cast<Eigen::Index>(g.idx.size()));
  for (size_t k = 0; k < g.idx.size(); ++k) {
    g.X.row(static_cast<Eigen::Index>(k)) = X.row(g.idx[k]);
    g.y(static_cast<Eigen::Index>(k)) = y(g.idx[k]);
  }
  return g;
}

}  // namespace detail

inline Patch2dResult run_patch2d_demo(const Patch2dConfig& cfg,
                                      const std::filesystem::path& out_dir) {
  detail::ensure_out_dir(out_dir);
  write_json_file(out_dir / "config.json", cfg.to_json());
  detail::Stopwatch total;

  const TargetFunction target(cfg.target, cfg.target_seed);
  SampleGrid sg{{{cfg.domain_lo, cfg.domain_hi, cfg.grid_points, true},
                 {cfg.domain_lo, cfg.domain_hi, cfg.grid_points, true}}};
  const GridSamples data = grid_sample(target, sg);

  const GridSpec grid{cfg.grid_points, cfg.domain_lo, cfg.domain_hi};
  const GridSquare train_region{cfg.train_anchor_row, cfg.train_anchor_col, cfg.train_edge, grid};
  const GridSquare fit_region{cfg.fit_anchor_row, cfg.fit_anchor_col, cfg.fit_edge, grid};
  validate_region(Region(train_region));
  validate_region(Region(fit_region));

  const auto train_pts = detail::gather(data.X, data.y, Region(train_region));
  const auto fit_pts = detail::gather(data.X, data.y, Region(fit_region));

  const std::uint64_t cell_seed = derive_seed(cfg.seed, 0);
  ReuploadModel model = make_model(AnsatzKind::LineAnsatz, cfg.layers, 1, 2);
  Rng init_rng(derive_seed(cell_seed, 0));
  init_theta(model, init_rng, cfg.init_sigma);

  TrainConfig tc;
  tc.optimizer = optimizer_from_name(cfg.optimizer);
  tc.steps = cfg.steps;
  tc.learning_rate = 1.0;  // ignored by the simplex optimizer
  tc.batch_size = kFullBatch;
  tc.seed = derive_seed(cell_seed, 1);
  const TrainReport report = train(model, train_pts.X, train_pts.y, tc);
  model.theta = report.final_theta;

  Patch2dResult res;
  const Eigen::VectorXd fq_train = forward_many(model, train_pts.X);
  res.r2_q_t_train = r_squared(train_pts.y, fq_train);

  SweepRow row_train;
  row_train.experiment = "patch2d_demo";
  row_train.target = cfg.target;
  row_train.qubits = 1;
  row_train.layers = cfg.layers;
  row_train.region_kind = "grid_square";
  row_train.region_size = std::to_string(cfg.train_edge);
  row_train.r2_q_t = res.r2_q_t_train;
  row_train.mse = report.loss_trace.empty() ? report.initial_loss : report.loss_trace.back();
  row_train.quantum_calls = 0;
  row_train.seed = cell_seed;
  res.traces.push_back({0, report.initial_loss, report.loss_trace});
  res.rows.push_back(row_train);

  // Exact surrogate of the trained model on the inner patch.
  const int L = cfg.layers;
  const FrequencyLattice lattice = full_lattice(L, 2);
  const Eigen::MatrixXd nodes = chebyshev_nodes_in_patch(Region(fit_region), L, 2);
  const Eigen::VectorXd fq_fit = forward_many(model, fit_pts.X);
  res.r2_q_t_fit = r_squared(fit_pts.y, fq_fit);

  SweepRow row_fit = row_train;
  row_fit.region_size = std::to_string(cfg.fit_edge);
  row_fit.r2_q_t = res.r2_q_t_fit;
  row_fit.mse.reset();

  std::optional<FourierSurrogate> surrogate;
  try {
    const Eigen::VectorXd node_vals = forward_many(model, nodes);
    ExactFitResult fitres = fit_exact(node_vals, lattice, nodes);
    res.fit_condition = fitres.condition;
    res.node_queries = fitres.quantum_calls;
    surrogate = std::move(fitres.surrogate);
  } catch (const FitError& e) {
    res.fit_failed = true;
    res.fit_error = e.what();
    res.fit_condition = e.condition;
  }

  if (surrogate) {
    const Eigen::VectorXd gc = evaluate_many(*surrogate, fit_pts.X);
    res.r2_c_q = r_squared(fq_fit, gc);
    res.r2_c_t = r_squared(fit_pts.y, gc);
    row_fit.r2_c_q = res.r2_c_q;
    row_fit.r2_c_t = res.r2_c_t;
    row_fit.quantum_calls = res.node_queries;
  }
  row_fit.seed = cell_seed;
  res.rows.push_back(row_fit);

  // Dense evaluation mesh over the full domain for plotting; the surrogate
  // column shows its behavior away from the patch it was fit on.
  {
    CsvWriter mesh(out_dir / "eval_grid.csv",
                   {"x1", "x2", "target", "f_quantum", "g_classical"});
    const Eigen::VectorXd ax = axis_points({cfg.domain_lo, cfg.domain_hi, cfg.eval_points, true});
    Eigen::VectorXd pt(2);
    for (Eigen::Index i = 0; i < ax.size(); ++i) {
      for (Eigen::Index j = 0; j < ax.size(); ++j) {
        const double x1 = ax[i], x2 = ax[j];
        pt << x1, x2;
        const double f = forward(model, pt);
        mesh.write_row({fmt_double(x1), fmt_double(x2), fmt_double(target(x1, x2)),
                        fmt_double(f),
                        surrogate ? fmt_double(evaluate(*surrogate, pt)) : std::string()});
      }
    }
  }

  Json summary;
  summary["experiment"] = "patch2d_demo";
  summary["target"] = cfg.target;
  summary["train_patch_points"] = train_pts.X.rows();
  summary["fit_patch_points"] = fit_pts.X.rows();
  summary["r2_q_t_train"] = res.r2_q_t_train ? Json(*res.r2_q_t_train) : Json();
  summary["r2_q_t_fit"] = res.r2_q_t_fit ? Json(*res.r2_q_t_fit) : Json();
  summary["r2_c_q"] = res.r2_c_q ? Json(*res.r2_c_q) : Json();
  summary["r2_c_t"] = res.r2_c_t ? Json(*res.r2_c_t) : Json();
  summary["fit_condition"] = res.fit_condition;
  summary["node_queries"] = res.node_queries;
  summary["fit_failed"] = res.fit_failed;
  if (res.fit_failed) summary["fit_error"] = res.fit_error;
  summary["final_train_mse"] =
      report.loss_trace.empty() ? report.initial_loss : report.loss_trace.back();
  summary["wall_ms_total"] = total.ms();
  res.summary = summary;

  detail::write_sweep_csv(out_dir / "sweep.csv", res.rows);
  detail::write_traces_csv(out_dir / "loss_traces.csv", res.traces);
  write_json_file(out_dir / "summary.json", summary);
  return res;
}

// ---------------------------------------------------------------------------
// Experiment 3: the full 2-feature suite. For every target and every patch
// edge, train a fresh model on the patch, surrogate it exactly, and fit the
// direct separable series to the target samples.

struct Sweep2dConfig {
  std::vector<std::string> targets = TargetFunction::all_names();
  std::uint64_t target_seed = 20240817;
  int grid_points = 22;
  double domain_lo = -kPi;
  double domain_hi = kPi;
  int anchor_row = 2;
  int anchor_col = 2;
  int edge_start = 2;
  int edge_end = 20;
  int layers = 2;
  std::string optimizer = "nelder_mead";
  int steps = 500;
  double init_sigma = 0.01;
  std::uint64_t seed = 424243;

  Json to_json() const {
    Json j;
    j["experiment"] = "sweep2d_suite";
    j["targets"] = targets;
    j["target_seed"] = target_seed;
    j["grid_points"] = grid_points;
    j["domain_lo"] = domain_lo;
    j["domain_hi"] = domain_hi;
    j["anchor_row"] = anchor_row;
    j["anchor_col"] = anchor_col;
    j["edge_start"] = edge_start;
    j["edge_end"] = edge_end;
    j["layers"] = layers;
    j["optimizer"] = optimizer;
    j["steps"] = steps;
    j["init_sigma"] = init_sigma;
    j["seed"] = seed;
    return j;
  }

  static Sweep2dConfig from_json(const Json& j) {
    Sweep2dConfig c;
    detail::ConfigReader r(j, "sweep2d_suite");
    detail::check_experiment_tag(r, "sweep2d_suite");
    r.get("targets", c.targets);
    r.get("target_seed", c.target_seed);
    r.get("grid_points", c.grid_points);
    r.get("domain_lo", c.domain_lo);
    r.get("domain_hi", c.domain_hi);
    r.get("anchor_row", c.anchor_row);
    r.get("anchor_col", c.anchor_col);
    r.get("edge_start", c.edge_start);
    r.get("edge_end", c.edge_end);
    r.get("layers", c.layers);
    r.get("optimizer", c.optimizer);
    r.get("steps", c.steps);
    r.get("init_sigma", c.init_sigma);
    r.get("seed", c.seed);
    r.finish();
    if (c.targets.empty()) throw ConfigError("sweep2d_suite: targets must be non-empty");
    if (c.edge_start < 2) throw ConfigError("sweep2d_suite: edge_start must be >= 2");
    if (c.edge_end < c.edge_start)
      throw ConfigError("sweep2d_suite: edge_end must be >= edge_start");
    return c;
  }
};

struct TargetTrendStats {
  std::string target;
  double r2_first_edge = 0.0;
  double r2_last_edge = 0.0;
  bool decreasing = false;
};

struct Sweep2dResult {
  std::vector<SweepRow> rows;
  std::vector<LossTrace> traces;
  std::vector<TargetTrendStats> trends;
  int n_decreasing = 0;
  int exact_fit_failures = 0;
  int separable_failures = 0;
  std::optional<double> min_r2_c_q;  // over rows whose exact fit succeeded
  Json summary;
};

inline Sweep2dResult run_sweep2d_suite(const Sweep2dConfig& cfg,
                                       const std::filesystem::path& out_dir) {
  detail::ensure_out_dir(out_dir);
  write_json_file(out_dir / "config.json", cfg.to_json());
  detail::Stopwatch total;

  SampleGrid sg{{{cfg.domain_lo, cfg.domain_hi, cfg.grid_points, true},
                 {cfg.domain_lo, cfg.domain_hi, cfg.grid_points, true}}};
  const GridSpec grid{cfg.grid_points, cfg.domain_lo, cfg.domain_hi};
  const OptimizerKind opt = optimizer_from_name(cfg.optimizer);
  const int L = cfg.layers;
  const FrequencyLattice lattice = full_lattice(L, 2);

  std::vector<int> edges;
  for (int e = cfg.edge_start; e <= cfg.edge_end; ++e) edges.push_back(e);

  Sweep2dResult res;
  Json fit_failures = Json::array();
  Json sep_failures = Json::array();

  for (size_t ti = 0; ti < cfg.targets.size(); ++ti) {
    const std::string& name = cfg.targets[ti];
    const TargetFunction target(name, derive_seed(cfg.target_seed, ti));
    const GridSamples data = grid_sample(target, sg);

    std::optional<double> r2_first, r2_last;
    for (size_t ei = 0; ei < edges.size(); ++ei) {
      const int edge = edges[ei];
      const std::uint64_t cell = static_cast<std::uint64_t>(ti) * edges.size() + ei;
      const std::uint64_t cell_seed = derive_seed(cfg.seed, cell);

      const GridSquare patch{cfg.anchor_row, cfg.anchor_col, edge, grid};
      validate_region(Region(patch));
      const auto pts = detail::gather(data.X, data.y, Region(patch));

      ReuploadModel model = make_model(AnsatzKind::LineAnsatz, cfg.layers, 1, 2);
      Rng init_rng(derive_seed(cell_seed, 0));
      init_theta(model, init_rng, cfg.init_sigma);

      TrainConfig tc;
      tc.optimizer = opt;
      tc.steps = cfg.steps;
      tc.learning_rate = 1.0;
      tc.batch_size = kFullBatch;
      tc.seed = derive_seed(cell_seed, 1);
      const TrainReport report = train(model, pts.X, pts.y, tc);
      model.theta = report.final_theta;

      const Eigen::VectorXd fq = forward_many(model, pts.X);
      const auto r2qt = r_squared(pts.y, fq);

      SweepRow row;
      row.experiment = "sweep2d_suite";
      row.target = name;
      row.qubits = 1;
      row.layers = cfg.layers;
      row.region_kind = "grid_square";
      row.region_size = std::to_string(edge);
      row.r2_q_t = r2qt;
      row.mse = report.loss_trace.empty() ? report.initial_loss : report.loss_trace.back();
      row.seed = cell_seed;

      // Exact surrogate of the trained model on this patch.
      try {
        const Eigen::MatrixXd nodes = chebyshev_nodes_in_patch(Region(patch), L, 2);
        const Eigen::VectorXd node_vals = forward_many(model, nodes);
        ExactFitResult fitres = fit_exact(node_vals, lattice, nodes);
        const Eigen::VectorXd gc = evaluate_many(fitres.surrogate, pts.X);
        row.r2_c_q = r_squared(fq, gc);
        row.quantum_calls = fitres.quantum_calls;
        if (row.r2_c_q) {
          if (!res.min_r2_c_q || *row.r2_c_q < *res.min_r2_c_q) res.min_r2_c_q = *row.r2_c_q;
        }
      } catch (const FitError& e) {
        ++res.exact_fit_failures;
        Json f;
        f["target"] = name;
        f["edge"] = edge;
        f["error"] = e.what();
        fit_failures.push_back(f);
      }

      // Direct separable fit to the target samples. On exact grid patches
      // the basis is rank-deficient (cosine and sine columns of one feature
      // only span as many directions as there are distinct feature values),
      // so these fits are expected to be rejected; the row records nothing.
      try {
        const int k_max = (edge + 1) / 2;
        SeparableFitResult sep = fit_separable(pts.y, pts.X, k_max);
        const Eigen::VectorXd gs = evaluate_many(sep.surrogate, pts.X);
        row.r2_c_t = r_squared(pts.y, gs);
      } catch (const std::exception& e) {
        ++res.separable_failures;
        Json f;
        f["target"] = name;
        f["edge"] = edge;
        f["error"] = e.what();
        sep_failures.push_back(f);
      }

      res.traces.push_back({static_cast<std::int64_t>(res.rows.size()), report.initial_loss,
                            report.loss_trace});
      res.rows.push_back(std::move(row));

      if (ei == 0) r2_first = r2qt;
      if (ei + 1 == edges.size()) r2_last = r2qt;
    }

    TargetTrendStats t;
    t.target = name;
    t.r2_first_edge = r2_first.value_or(0.0);
    t.r2_last_edge = r2_last.value_or(0.0);
    t.decreasing = t.r2_first_edge > t.r2_last_edge;
    if (t.decreasing) ++res.n_decreasing;
    res.trends.push_back(t);
  }

  Json summary;
  summary["experiment"] = "sweep2d_suite";
  summary["n_rows"] = res.rows.size();
  Json per_target = Json::array();
  for (const TargetTrendStats& t : res.trends) {
    Json s;
    s["target"] = t.target;
    s["r2_first_edge"] = t.r2_first_edge;
    s["r2_last_edge"] = t.r2_last_edge;
    s["decreasing"] = t.decreasing;
    per_target.push_back(s);
  }
  summary["per_target"] = per_target;
  summary["n_decreasing"] = res.n_decreasing;
  summary["exact_fit_failures"] = fit_failures;
  summary["separable_failures"] = sep_failures.size();
  summary["separable_failure_rows"] = sep_failures;
  summary["min_r2_c_q"] = res.min_r2_c_q ? Json(*res.min_r2_c_q) : Json();
  summary["wall_ms_total"] = total.ms();
  res.summary = summary;

  detail::write_sweep_csv(out_dir / "sweep.csv", res.rows);
  detail::write_traces_csv(out_dir / "loss_traces.csv", res.traces);
  write_json_file(out_dir / "summary.json", summary);
  return res;
}

// ---------------------------------------------------------------------------
// Experiment 4: kernel SVM on the two-class flower data, calibrated scores as
// the target, local surrogates on balls of growing radius.

struct QsvmConfig {
  double svm_c = 1.0;
  double smo_tol = 1e-3;
  int platt_iters = 100;
  bool population_std = true;
  int layers = 2;
  std::string optimizer = "nesterov";
  int steps = 100;
  double learning_rate = 0.5;
  double momentum = 0.9;
  double init_sigma = 0.01;
  double radius_start = 0.3;
  double radius_step = 0.2;
  double radius_end = 2.5;
  double focal_radius = 1.0;
  int mesh_points = 100;
  std::uint64_t seed = 424243;

  Json to_json() const {
    Json j;
    j["experiment"] = "qsvm_demo";
    j["svm_c"] = svm_c;
    j["smo_tol"] = smo_tol;
    j["platt_iters"] = platt_iters;
    j["population_std"] = population_std;
    j["layers"] = layers;
    j["optimizer"] = optimizer;
    j["steps"] = steps;
    j["learning_rate"] = learning_rate;
    j["momentum"] = momentum;
    j["init_sigma"] = init_sigma;
    j["radius_start"] = radius_start;
    j["radius_step"] = radius_step;
    j["radius_end"] = radius_end;
    j["focal_radius"] = focal_radius;
    j["mesh_points"] = mesh_points;
    j["seed"] = seed;
    return j;
  }

  static QsvmConfig from_json(const Json& j) {
    QsvmConfig c;
    detail::ConfigReader r(j, "qsvm_demo");
    detail::check_experiment_tag(r, "qsvm_demo");
    r.get("svm_c", c.svm_c);
    r.get("smo_tol", c.smo_tol);
    r.get("platt_iters", c.platt_iters);
    r.get("population_std", c.population_std);
    r.get("layers", c.layers);
    r.get("optimizer", c.optimizer);
    r.get("steps", c.steps);
    r.get("learning_rate", c.learning_rate);
    r.get("momentum", c.momentum);
    r.get("init_sigma", c.init_sigma);
    r.get("radius_start", c.radius_start);
    r.get("radius_step", c.radius_step);
    r.get("radius_end", c.radius_end);
    r.get("focal_radius", c.focal_radius);
    r.get("mesh_points", c.mesh_points);
    r.get("seed", c.seed);
    r.finish();
    if (c.svm_c <= 0) throw ConfigError("qsvm_demo: svm_c must be positive");
    if (c.mesh_points < 2) throw ConfigError("qsvm_demo: mesh_points must be >= 2");
    return c;
  }
};

struct RadiusStats {
  double radius = 0.0;
  Eigen::Index n_points = 0;
  std::optional<double> r2_q_t;  // surrogate vs calibrated SVM scores
  std::optional<double> r2_c_q;
  std::optional<double> r2_c_t;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  bool loss_halved = false;
};

struct QsvmResult {
  std::vector<SweepRow> rows;
  std::vector<LossTrace> traces;
  double training_accuracy = 0.0;
  int support_vectors = 0;
  double platt_a = 0.0;
  double platt_b = 0.0;
  RadiusStats focal;
  std::vector<RadiusStats> radii;
  std::optional<double> min_r2_c_q;
  std::optional<double> mesh_r2_q_svm;
  Json summary;
};

namespace detail {

// Shared per-radius work for the SVM surrogation experiments: train a fresh
// model on the patch, surrogate it exactly, score everything.
struct PatchFit {
  ReuploadModel model;
  std::optional<FourierSurrogate> surrogate;
  RadiusStats stats;
  TrainReport report;
  std::int64_t quantum_calls = 0;
  std::string fit_error;
};

inline PatchFit fit_ball_patch(const Eigen::MatrixXd& Xp, const Eigen::VectorXd& zp,
                               const Ball& ball, int layers, OptimizerKind opt, int steps,
                               double lr, double momentum, double init_sigma,
                               std::uint64_t cell_seed) {
  PatchFit out;
  out.model = make_model(AnsatzKind::StronglyEntanglingReupload, layers, 2, 2);
  Rng init_rng(derive_seed(cell_seed, 0));
  init_theta(out.model, init_rng, init_sigma);

  TrainConfig tc;
  tc.optimizer = opt;
  tc.steps = steps;
  tc.learning_rate = lr;
  tc.momentum = momentum;
  tc.batch_size = kFullBatch;
  tc.seed = derive_seed(cell_seed, 1);
  out.report = train(out.model, Xp, zp, tc);
  out.model.theta = out.report.final_theta;

  const Eigen::VectorXd fq = forward_many(out.model, Xp);
  out.stats.radius = ball.radius;
  out.stats.n_points = Xp.rows();
  out.stats.r2_q_t = r_squared(zp, fq);
  out.stats.initial_loss = out.report.initial_loss;
  out.stats.final_loss =
      out.report.loss_trace.empty() ? out.report.initial_loss : out.report.loss_trace.back();
  out.stats.loss_halved = out.stats.final_loss <= 0.5 * out.stats.initial_loss;

  try {
    const Eigen::MatrixXd nodes = chebyshev_nodes_in_patch(Region(ball), layers, 2);
    const Eigen::VectorXd node_vals = forward_many(out.model, nodes);
    ExactFitResult fitres = fit_exact(node_vals, full_lattice(layers, 2), nodes);
    out.quantum_calls = fitres.quantum_calls;
    const Eigen::VectorXd gc = evaluate_many(fitres.surrogate, Xp);
    out.stats.r2_c_q = r_squared(fq, gc);
    out.stats.r2_c_t = r_squared(zp, gc);
    out.surrogate = std::move(fitres.surrogate);
  } catch (const FitError& e) {
    out.fit_error = e.what();
  }
  return out;
}

}  // namespace detail

inline QsvmResult run_qsvm_demo(const QsvmConfig& cfg, const std::filesystem::path& out_dir) {
  detail::ensure_out_dir(out_dir);
  write_json_file(out_dir / "config.json", cfg.to_json());
  detail::Stopwatch total;

  const Dataset iris = load_iris_2c2f();
  const Eigen::MatrixXd Xs = standardize_fit_transform(iris.X, cfg.population_std).second;
  const Eigen::VectorXd ypm = labels_to_pm1(iris.y);

  // Kernel machine plus probability calibration on the training decisions.
  const Eigen::MatrixXd K = kernel_matrix(Xs);
  SvmModel svm = smo_train(K, ypm, cfg.svm_c, cfg.smo_tol);
  Eigen::VectorXd decisions(K.rows());
  for (Eigen::Index i = 0; i < K.rows(); ++i)
    decisions(i) = decision_from_krow(svm, K.row(i).transpose());
  Eigen::VectorXd pred(K.rows());
  for (Eigen::Index i = 0; i < K.rows(); ++i) pred(i) = decisions(i) >= 0 ? 1.0 : -1.0;

  QsvmResult res;
  res.training_accuracy = accuracy(ypm, pred);
  res.support_vectors = static_cast<int>(svm.support.size());

  platt_fit(svm, decisions, ypm, cfg.platt_iters);
  res.platt_a = svm.platt_a;
  res.platt_b = svm.platt_b;

  Eigen::VectorXd z(K.rows());
  for (Eigen::Index i = 0; i < K.rows(); ++i)
    z(i) = posterior_to_z(posterior_from_decision(svm, decisions(i)));

  const OptimizerKind opt = optimizer_from_name(cfg.optimizer);
  const Eigen::VectorXd center = Eigen::VectorXd::Zero(2);

  auto make_row = [&](const detail::PatchFit& pf, std::uint64_t cell_seed) {
    SweepRow row;
    row.experiment = "qsvm_demo";
    row.target = "svm_score";
    row.qubits = 2;
    row.layers = cfg.layers;
    row.region_kind = "ball";
    row.region_size = fmt_double(pf.stats.radius);
    row.r2_q_t = pf.stats.r2_q_t;
    row.r2_c_q = pf.stats.r2_c_q;
    row.r2_c_t = pf.stats.r2_c_t;
    row.mse = pf.stats.final_loss;
    row.quantum_calls = pf.quantum_calls;
    row.seed = cell_seed;
    return row;
  };

  // Focal patch: the configured showcase radius, whose surrogate is also
  // evaluated on the dense mesh below.
  const Ball focal_ball{center, cfg.focal_radius};
  const auto focal_sel = detail::gather(Xs, z, Region(focal_ball));
  const std::uint64_t focal_seed = derive_seed(cfg.seed, 0);
  detail::PatchFit focal = detail::fit_ball_patch(
      focal_sel.X, focal_sel.y, focal_ball, cfg.layers, opt, cfg.steps, cfg.learning_rate,
      cfg.momentum, cfg.init_sigma, focal_seed);
  res.focal = focal.stats;
  res.traces.push_back({static_cast<std::int64_t>(res.rows.size()), focal.report.initial_loss,
                        focal.report.loss_trace});
  res.rows.push_back(make_row(focal, focal_seed));
  if (focal.stats.r2_c_q) res.min_r2_c_q = focal.stats.r2_c_q;

  // Radius sweep with freshly trained models.
  const std::vector<Ball> balls =
      sweep_balls(center, cfg.radius_start, cfg.radius_step, cfg.radius_end);
  for (size_t bi = 0; bi < balls.size(); ++bi) {
    const std::uint64_t cell_seed = derive_seed(cfg.seed, bi + 1);
    const auto sel = detail::gather(Xs, z, Region(balls[bi]));
    detail::PatchFit pf = detail::fit_ball_patch(
        sel.X, sel.y, balls[bi], cfg.layers, opt, cfg.steps, cfg.learning_rate, cfg.momentum,
        cfg.init_sigma, cell_seed);
    res.radii.push_back(pf.stats);
    res.traces.push_back({static_cast<std::int64_t>(res.rows.size()), pf.report.initial_loss,
                          pf.report.loss_trace});
    res.rows.push_back(make_row(pf, cell_seed));
    if (pf.stats.r2_c_q && (!res.min_r2_c_q || *pf.stats.r2_c_q < *res.min_r2_c_q))
      res.min_r2_c_q = pf.stats.r2_c_q;
  }

  // Dense mesh over the data bounding box: calibrated SVM score, the focal
  // surrogate pair, and the elementwise relative error between them.
  {
    const double lo1 = Xs.col(0).minCoeff(), hi1 = Xs.col(0).maxCoeff();
    const double lo2 = Xs.col(1).minCoeff(), hi2 = Xs.col(1).maxCoeff();
    const Eigen::VectorXd ax1 = axis_points({lo1, hi1, cfg.mesh_points, true});
    const Eigen::VectorXd ax2 = axis_points({lo2, hi2, cfg.mesh_points, true});
    Eigen::MatrixXd mesh(ax1.size() * ax2.size(), 2);
    Eigen::Index m = 0;
    for (Eigen::Index i = 0; i < ax1.size(); ++i)
      for (Eigen::Index j = 0; j < ax2.size(); ++j, ++m) {
        mesh(m, 0) = ax1[i];
        mesh(m, 1) = ax2[j];
      }
    const Eigen::MatrixXd Km = kernel_cross(mesh, Xs);
    Eigen::VectorXd z_mesh(mesh.rows());
    for (Eigen::Index i = 0; i < mesh.rows(); ++i)
      z_mesh(i) =
          posterior_to_z(posterior_from_decision(svm, decision_from_krow(svm, Km.row(i).transpose())));
    const Eigen::VectorXd f_mesh = forward_many(focal.model, mesh);
    res.mesh_r2_q_svm = r_squared(z_mesh, f_mesh);
    const Eigen::VectorXd rel = relative_error(z_mesh, f_mesh);

    CsvWriter mf(out_dir / "mesh.csv",
                 {"x1", "x2", "z_svm", "f_quantum", "g_classical", "rel_err_q_svm"});
    for (Eigen::Index i = 0; i < mesh.rows(); ++i) {
      const std::string g = focal.surrogate
                                ? fmt_double(evaluate(*focal.surrogate, mesh.row(i).transpose()))
                                : std::string();
      mf.write_row({fmt_double(mesh(i, 0)), fmt_double(mesh(i, 1)), fmt_double(z_mesh(i)),
                    fmt_double(f_mesh(i)), g, fmt_double(rel(i))});
    }
  }

  Json summary;
  summary["experiment"] = "qsvm_demo";
  summary["training_accuracy"] = res.training_accuracy;
  summary["support_vectors"] = res.support_vectors;
  summary["platt_a"] = res.platt_a;
  summary["platt_b"] = res.platt_b;
  auto radius_json = [](const RadiusStats& s) {
    Json j;
    j["radius"] = s.radius;
    j["n_points"] = s.n_points;
    j["r2_q_t"] = s.r2_q_t ? Json(*s.r2_q_t) : Json();
    j["r2_c_q"] = s.r2_c_q ? Json(*s.r2_c_q) : Json();
    j["r2_c_t"] = s.r2_c_t ? Json(*s.r2_c_t) : Json();
    j["initial_loss"] = s.initial_loss;
    j["final_loss"] = s.final_loss;
    j["loss_halved"] = s.loss_halved;
    return j;
  };
  summary["focal"] = radius_json(res.focal);
  Json radii = Json::array();
  for (const RadiusStats& s : res.radii) radii.push_back(radius_json(s));
  summary["radii"] = radii;
  summary["min_r2_c_q"] = res.min_r2_c_q ? Json(*res.min_r2_c_q) : Json();
  summary["mesh_r2_q_svm"] = res.mesh_r2_q_svm ? Json(*res.mesh_r2_q_svm) : Json();
  summary["wall_ms_total"] = total.ms();
  res.summary = summary;

  detail::write_sweep_csv(out_dir / "sweep.csv", res.rows);
  detail::write_traces_csv(out_dir / "loss_traces.csv", res.traces);
  write_json_file(out_dir / "summary.json", summary);
  return res;
}

// ---------------------------------------------------------------------------
// Experiment 5: high-dimensional practical limits on the diagnostic dataset.
// Patches live in standardized principal-component space; models train on the
// same points mapped to the encoding interval.

struct WdbcConfig {
  std::string wdbc_path;  // required; the CLI --wdbc flag fills or overrides it
  int pca_components = 6;
  bool population_std = true;
  int layers = 3;
  std::string optimizer = "nesterov";
  int steps = 100;
  double learning_rate = 0.5;
  double momentum = 0.9;
  double init_sigma = 0.01;
  double radius_start = 0.5;
  double radius_step = 0.05;
  double radius_end = 3.45;
  int k_max = 3;
  double bound_epsilon = 0.1;
  double bound_delta = 0.01;
  double bound_m_norm = 1.0;
  std::uint64_t seed = 424243;

  Json to_json() const {
    Json j;
    j["experiment"] = "wdbc_limits";
    j["wdbc_path"] = wdbc_path;
    j["pca_components"] = pca_components;
    j["population_std"] = population_std;
    j["layers"] = layers;
    j["optimizer"] = optimizer;
    j["steps"] = steps;
    j["learning_rate"] = learning_rate;
    j["momentum"] = momentum;
    j["init_sigma"] = init_sigma;
    j["radius_start"] = radius_start;
    j["radius_step"] = radius_step;
    j["radius_end"] = radius_end;
    j["k_max"] = k_max;
    j["bound_epsilon"] = bound_epsilon;
    j["bound_delta"] = bound_delta;
    j["bound_m_norm"] = bound_m_norm;
    j["seed"] = seed;
    return j;
  }

  static WdbcConfig from_json(const Json& j) {
    WdbcConfig c;
    detail::ConfigReader r(j, "wdbc_limits");
    detail::check_experiment_tag(r, "wdbc_limits");
    r.get("wdbc_path", c.wdbc_path);
    r.get("pca_components", c.pca_components);
    r.get("population_std", c.population_std);
    r.get("layers", c.layers);
    r.get("optimizer", c.optimizer);
    r.get("steps", c.steps);
    r.get("learning_rate", c.learning_rate);
    r.get("momentum", c.momentum);
    r.get("init_sigma", c.init_sigma);
    r.get("radius_start", c.radius_start);
    r.get("radius_step", c.radius_step);
    r.get("radius_end", c.radius_end);
    r.get("k_max", c.k_max);
    r.get("bound_epsilon", c.bound_epsilon);
    r.get("bound_delta", c.bound_delta);
    r.get("bound_m_norm", c.bound_m_norm);
    r.get("seed", c.seed);
    r.finish();
    if (c.pca_components < 1) throw ConfigError("wdbc_limits: pca_components must be >= 1");
    if (c.k_max < 1) throw ConfigError("wdbc_limits: k_max must be >= 1");
    return c;
  }
};

struct WdbcRadiusStats {
  double radius = 0.0;
  Eigen::Index n_local = 0;
  bool underdetermined = false;
  bool fit_failed = false;
  std::optional<double> r2_q_t;
  std::optional<double> r2_c_q;
  std::optional<double> r2_c_t;
};

struct WdbcResult {
  std::vector<SweepRow> rows;
  std::vector<LossTrace> traces;
  std::vector<WdbcRadiusStats> radii;
  int n_solvable = 0;
  int n_underdetermined = 0;
  std::optional<double> min_r2_c_q_solvable;
  std::int64_t separable_columns = 0;
  std::int64_t full_lattice_floor = 0;
  double pca_cumulative_evr = 0.0;
  Json summary;
};

inline WdbcResult run_wdbc_limits(const WdbcConfig& cfg, const std::filesystem::path& out_dir) {
  detail::ensure_out_dir(out_dir);
  if (cfg.wdbc_path.empty())
    throw ConfigError("wdbc_limits: wdbc_path is required (config key or --wdbc flag)");
  write_json_file(out_dir / "config.json", cfg.to_json());
  detail::Stopwatch total;

  const Dataset wdbc = load_wdbc(cfg.wdbc_path);
  const auto [pca, scores_raw] = pca_fit_transform(wdbc.X, cfg.pca_components);
  const Eigen::MatrixXd scores = standardize_fit_transform(scores_raw, cfg.population_std).second;
  const Eigen::MatrixXd mapped = map_to_0_2pi(scores);
  const Eigen::VectorXd ypm = labels_to_pm1(wdbc.y);

  const int d = cfg.pca_components;
  WdbcResult res;
  res.separable_columns = 1 + 2 * static_cast<std::int64_t>(cfg.k_max) * d;
  res.full_lattice_floor = 1;
  for (int k = 0; k < d; ++k) res.full_lattice_floor *= 2 * cfg.layers + 1;
  res.pca_cumulative_evr = pca.explained_variance_ratio.sum();

  const OptimizerKind opt = optimizer_from_name(cfg.optimizer);
  const std::vector<HyperCube> cubes =
      sweep_hypercubes(cfg.radius_start, cfg.radius_step, cfg.radius_end, d);

  for (size_t ci = 0; ci < cubes.size(); ++ci) {
    const std::uint64_t cell_seed = derive_seed(cfg.seed, ci);
    // Membership is judged in standardized score space; training inputs are
    // the same rows mapped onto the encoding interval.
    const auto idx = select(scores, Region(cubes[ci]));
    Eigen::MatrixXd Xp(static_cast<Eigen::Index>(idx.size()), d);
    Eigen::VectorXd yp(static_cast<Eigen::Index>(idx.size()));
    for (size_t k = 0; k < idx.size(); ++k) {
      Xp.row(static_cast<Eigen::Index>(k)) = mapped.row(idx[k]);
      yp(static_cast<Eigen::Index>(k)) = ypm(idx[k]);
    }

    WdbcRadiusStats st;
    st.radius = cubes[ci].half_width;
    st.n_local = Xp.rows();

    SweepRow row;
    row.experiment = "wdbc_limits";
    row.target = "diagnosis";
    row.qubits = 2;
    row.layers = cfg.layers;
    row.region_kind = "hypercube";
    row.region_size = fmt_double(cubes[ci].half_width);
    row.seed = cell_seed;

    if (Xp.rows() < res.separable_columns) {
      st.underdetermined = true;
      ++res.n_underdetermined;
      res.radii.push_back(st);
      res.rows.push_back(std::move(row));
      continue;
    }

    ReuploadModel model = make_model(AnsatzKind::StronglyEntanglingReupload, cfg.layers, 2, d);
    Rng init_rng(derive_seed(cell_seed, 0));
    init_theta(model, init_rng, cfg.init_sigma);

    TrainConfig tc;
    tc.optimizer = opt;
    tc.steps = cfg.steps;
    tc.learning_rate = cfg.learning_rate;
    tc.momentum = cfg.momentum;
    tc.batch_size = kFullBatch;
    tc.seed = derive_seed(cell_seed, 1);
    const TrainReport report = train(model, Xp, yp, tc);
    model.theta = report.final_theta;

    const Eigen::VectorXd fq = forward_many(model, Xp);
    st.r2_q_t = r_squared(yp, fq);
    row.r2_q_t = st.r2_q_t;
    row.mse = report.loss_trace.empty() ? report.initial_loss : report.loss_trace.back();

    try {
      SeparableFitResult sep = fit_separable(fq, Xp, cfg.k_max);
      const Eigen::VectorXd gs = evaluate_many(sep.surrogate, Xp);
      st.r2_c_q = r_squared(fq, gs);
      st.r2_c_t = r_squared(yp, gs);
      row.r2_c_q = st.r2_c_q;
      row.r2_c_t = st.r2_c_t;
      row.quantum_calls = Xp.rows();  // the fit reads the model once per sample
      ++res.n_solvable;
      if (st.r2_c_q && (!res.min_r2_c_q_solvable || *st.r2_c_q < *res.min_r2_c_q_solvable))
        res.min_r2_c_q_solvable = st.r2_c_q;
    } catch (const std::exception& e) {
      st.fit_failed = true;
      (void)e;
    }

    res.traces.push_back({static_cast<std::int64_t>(res.rows.size()), report.initial_loss,
                          report.loss_trace});
    res.radii.push_back(st);
    res.rows.push_back(std::move(row));
  }

  Json summary;
  summary["experiment"] = "wdbc_limits";
  summary["n_rows"] = res.rows.size();
  summary["separable_columns"] = res.separable_columns;
  summary["full_lattice_floor"] = res.full_lattice_floor;
  summary["unique_coefficients"] = coefficient_count(cfg.layers, d);
  summary["invocation_bound_example"] = Json{
      {"total_coefficients", res.full_lattice_floor},
      {"epsilon", cfg.bound_epsilon},
      {"delta", cfg.bound_delta},
      {"m_norm", cfg.bound_m_norm},
      {"n_total", invocation_bound(res.full_lattice_floor, cfg.bound_m_norm, cfg.bound_epsilon,
                                   cfg.bound_delta)}};
  summary["pca_cumulative_explained_variance"] = res.pca_cumulative_evr;
  Json radii = Json::array();
  for (const WdbcRadiusStats& s : res.radii) {
    Json j;
    j["radius"] = s.radius;
    j["n_local"] = s.n_local;
    j["status"] = s.underdetermined ? "underdetermined" : (s.fit_failed ? "fit_failed" : "ok");
    j["r2_q_t"] = s.r2_q_t ? Json(*s.r2_q_t) : Json();
    j["r2_c_q"] = s.r2_c_q ? Json(*s.r2_c_q) : Json();
    j["r2_c_t"] = s.r2_c_t ? Json(*s.r2_c_t) : Json();
    radii.push_back(j);
  }
  summary["radii"] = radii;
  summary["n_solvable"] = res.n_solvable;
  summary["n_underdetermined"] = res.n_underdetermined;
  summary["min_r2_c_q_solvable"] =
      res.min_r2_c_q_solvable ? Json(*res.min_r2_c_q_solvable) : Json();
  summary["wall_ms_total"] = total.ms();
  res.summary = summary;

  detail::write_sweep_csv(out_dir / "sweep.csv", res.rows);
  detail::write_traces_csv(out_dir / "loss_traces.csv", res.traces);
  write_json_file(out_dir / "summary.json", summary);
  return res;
}

}  // namespace locsur
