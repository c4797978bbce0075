#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string_view>
#include <variant>

#include "pdmp/coupling.hpp"
#include "pdmp/csv.hpp"
#include "pdmp/error.hpp"
#include "pdmp/evaluation.hpp"
#include "pdmp/model_io.hpp"
#include "pdmp/qp_dmp.hpp"
#include "pdmp/rmp_dmp.hpp"
#include "pdmp/synthetic.hpp"

namespace pdmp::cli {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Raised for option combinations CLI11 cannot check on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string output;
  std::string demo;
  std::string method = "rmp";
  std::string goal = "mean";
  std::string learner = "rls";
  double dt = 1e-3;
  std::optional<int> cycles;
  int kernels = 25;
  std::optional<double> width;
  double alpha_z = 48.0;
  double lambda = 0.994;
  int passes = 10;
  std::optional<double> omega;
  std::uint64_t seed = 0;
  std::vector<double> perturb;
  std::vector<double> amplitude{1.0, 1.0, 1.0};
  double osc_coupling = 10.0;
  int osc_harmonics = 10;
  double osc_rate = 2.0;
  double noise = 0.0;
  std::vector<double> center;
  std::vector<std::vector<double>> harmonics;
};

// Output sink: a file, or `fallback` for "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty()) throw UsageError("--output is required");
    if (path != "-") {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw ParseError("cannot write '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }
  void close() {
    if (file_.is_open()) {
      file_.close();
      if (!file_) throw ParseError("failed writing output");
    }
  }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void summary(std::ostream& out, std::string_view key, double value) {
  out << key << '=' << format_double(value) << '\n';
}

void summary(std::ostream& out, std::string_view key, std::string_view value) {
  out << key << '=' << value << '\n';
}

Method parse_method(const std::string& m) {
  return m == "qp" ? Method::kQp : Method::kRmp;
}

TrainConfig train_config(const Options& o) {
  TrainConfig c;
  c.omega = o.omega;
  c.dmp.kernels = o.kernels;
  c.dmp.width = o.width;
  c.dmp.alpha_z = o.alpha_z;
  c.lambda = o.lambda;
  c.rls_passes = o.passes;
  if (o.learner == "ls") {
    c.learning = Learning::kBatch;
    c.fit = FitMethod::kLeastSquares;
  } else if (o.learner == "lwr") {
    c.learning = Learning::kBatch;
    c.fit = FitMethod::kLocallyWeighted;
  } else if (o.learner == "rls-kernel") {
    c.learning = Learning::kRecursive;
  } else {
    c.learning = Learning::kJointRecursive;
  }
  if (o.goal == "identity") {
    c.goal = GoalChoice::kIdentity;
  } else if (o.goal == "zero") {
    c.goal = GoalChoice::kZero;
  } else {
    c.goal = GoalChoice::kMean;
  }
  if (o.amplitude.size() != 3) {
    throw UsageError("--amplitude takes 3 values");
  }
  c.amplitude = Eigen::Vector3d(o.amplitude[0], o.amplitude[1], o.amplitude[2]);
  if (!(c.amplitude.minCoeff() > 0.0)) {
    throw UsageError("--amplitude entries must be positive");
  }
  c.oscillator.coupling = o.osc_coupling;
  c.oscillator.harmonics = o.osc_harmonics;
  c.oscillator.learning_rate = o.osc_rate;
  return c;
}

TangentVector perturbation(const Options& o) {
  switch (o.perturb.size()) {
    case 0:
      return TangentVector::Zero();
    case 1:
      return TangentVector(o.perturb[0], 0.0, 0.0);
    case 3:
      return TangentVector(o.perturb[0], o.perturb[1], o.perturb[2]);
    default:
      throw UsageError("--perturb takes 1 or 3 values");
  }
}

int cmd_generate(const Options& o, std::ostream& out) {
  SyntheticDemo spec = default_synthetic_demo();
  if (!o.center.empty()) {
    if (o.center.size() != 4) throw UsageError("--center takes w x y z");
    spec.center = UnitQuaternion::normalized(o.center[0], o.center[1],
                                             o.center[2], o.center[3]);
  }
  if (!o.harmonics.empty()) {
    spec.harmonics.clear();
    for (const auto& h : o.harmonics) {
      if (h.size() != 7 || h[0] < 1.0 || h[0] != std::floor(h[0])) {
        throw UsageError(
            "--harmonic takes: multiple ax ay az px py pz (multiple >= 1)");
      }
      spec.harmonics.push_back({static_cast<int>(h[0]),
                                Eigen::Vector3d(h[1], h[2], h[3]),
                                Eigen::Vector3d(h[4], h[5], h[6])});
    }
  }
  spec.frequency = o.omega.value_or(kTwoPi);
  spec.dt = o.dt;
  spec.cycles = o.cycles.value_or(1);
  spec.noise = o.noise;
  spec.seed = o.seed;
  const QuatTrajectory demo = generate_demo(spec);
  Sink sink(o.output, out);
  write_quat_csv(sink.get(), demo);
  sink.close();
  return kOk;
}

template <typename Model>
double model_frequency(const Model& m) {
  if constexpr (std::is_same_v<Model, qp::QpDmpModel>) {
    return m.phase_frequency;
  } else {
    return m.inner.omega;
  }
}

std::size_t rollout_steps(double omega, double dt, int cycles) {
  return static_cast<std::size_t>(
      std::llround(cycles * kTwoPi / omega / dt));
}

int cmd_train(const Options& o, std::ostream& out) {
  if (o.input.empty()) throw UsageError("--input is required");
  const QuatTrajectory raw = read_quat_csv(std::filesystem::path(o.input));
  const TrainConfig cfg = train_config(o);
  const QuatTrajectory demo = drop_closing_sample(raw);

  AnyModel model;
  std::vector<RolloutSample> roll;
  double omega = 0.0;
  const KernelBasis* basis = nullptr;
  // Three cycles from the stored start; the third is scored.
  constexpr int kCycles = 3;
  if (parse_method(o.method) == Method::kQp) {
    model = qp::train(raw, cfg);
    const auto& m = std::get<qp::QpDmpModel>(model);
    omega = model_frequency(m);
    basis = &m.basis;
    roll = qp::rollout(m, m.initial, o.dt, rollout_steps(omega, o.dt, kCycles));
  } else {
    model = rmp::train(raw, cfg);
    const auto& m = std::get<rmp::RmpDmpModel>(model);
    omega = model_frequency(m);
    basis = &m.inner.basis;
    roll = rmp::rollout(m, m.initial, o.dt, rollout_steps(omega, o.dt, kCycles));
  }
  const CycleReference ref(demo, omega);
  const double period = kTwoPi / omega;
  const double err = max_phase_error(roll, ref, (kCycles - 1) * period);
  const double coverage =
      basis->coverage(demo_phases(demo, omega)).minCoeff();

  Sink sink(o.output, out);
  sink.get() << dump_model(model);
  sink.close();
  if (o.output != "-") {
    summary(out, "method", o.method);
    summary(out, "learner", o.learner);
    summary(out, "samples", static_cast<double>(demo.size()));
    summary(out, "omega", omega);
    summary(out, "kernels", static_cast<double>(basis->size()));
    summary(out, "width", basis->width);
    summary(out, "reproduction_error", err);
    summary(out, "min_kernel_coverage", coverage);
  }
  return kOk;
}

int cmd_rollout(const Options& o, std::ostream& out) {
  if (o.input.empty()) throw UsageError("--input is required");
  const AnyModel model = [&] {
    try {
      return load_model(std::filesystem::path(o.input));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError("'" + o.input + "': " + e.what());
    }
  }();
  const TangentVector p = perturbation(o);
  const int cycles = o.cycles.value_or(5);

  std::vector<RolloutSample> roll;
  if (const auto* m = std::get_if<rmp::RmpDmpModel>(&model)) {
    const double w = model_frequency(*m);
    roll = rmp::rollout(*m, rmp::start_state(*m, p), o.dt,
                        rollout_steps(w, o.dt, cycles));
  } else if (const auto* m = std::get_if<qp::QpDmpModel>(&model)) {
    const double w = model_frequency(*m);
    roll = qp::rollout(*m, qp::start_state(*m, p), o.dt,
                       rollout_steps(w, o.dt, cycles));
  } else {
    throw ParseError("'" + o.input + "' is not an orientation model");
  }
  const Vec3Series w = rollout_angular_velocity(roll);

  Sink sink(o.output, out);
  constexpr std::string_view kCols[] = {"t",  "qw", "qx", "qy",      "qz",
                                        "wx", "wy", "wz", "norm_err"};
  write_csv_header(sink.get(), kCols);
  for (std::size_t k = 0; k < roll.size(); ++k) {
    const Eigen::Vector4d c = roll[k].q.coeffs();
    const double row[] = {roll[k].t, c[0], c[1], c[2], c[3], w[k][0],
                          w[k][1],   w[k][2], std::abs(roll[k].q.norm() - 1.0)};
    write_csv_row(sink.get(), row);
  }
  sink.close();
  return kOk;
}

// Rough frequency from mean crossings, used when no --omega is given.
double crossing_frequency(std::span<const double> u, double dt) {
  double mean = 0.0;
  for (double v : u) mean += v;
  mean /= static_cast<double>(u.size());
  int crossings = 0;
  for (std::size_t k = 1; k < u.size(); ++k) {
    if ((u[k - 1] - mean) * (u[k] - mean) < 0.0) ++crossings;
  }
  if (crossings < 2) {
    throw UsageError("input has no clear oscillation; pass --omega");
  }
  return std::numbers::pi * crossings / (dt * static_cast<double>(u.size()));
}

int cmd_oscillate(const Options& o, std::ostream& out) {
  std::optional<QuatTrajectory> demo;
  if (!o.demo.empty()) {
    demo = drop_closing_sample(read_quat_csv(std::filesystem::path(o.demo)));
  }
  std::vector<double> u;
  double t0 = 0.0;
  double dt = 0.0;
  if (!o.input.empty()) {
    ScalarSignal sig = read_signal_csv(std::filesystem::path(o.input));
    const std::size_t n = sig.values.size();
    if (n < 2) throw ParseError("'" + o.input + "' needs at least 2 rows");
    t0 = sig.timestamps.front();
    dt = (sig.timestamps.back() - t0) / static_cast<double>(n - 1);
    for (std::size_t k = 1; k < n; ++k) {
      const double step = sig.timestamps[k] - sig.timestamps[k - 1];
      if (!(std::abs(step - dt) <= 1e-6 * dt)) {
        throw ParseError("'" + o.input + "' is not uniformly sampled");
      }
    }
    u = std::move(sig.values);
  } else if (demo) {
    const std::vector<double> one =
        dominant_signal(*demo, karcher_mean(demo->samples()));
    for (int c = 0; c < o.cycles.value_or(20); ++c) {
      u.insert(u.end(), one.begin(), one.end());
    }
    dt = demo->dt();
  } else {
    throw UsageError("oscillate needs --input, --demo or both");
  }

  const TrainConfig tc = train_config(o);
  const double guess = o.omega ? *o.omega : crossing_frequency(u, dt);
  std::vector<CoupledSample> rows;
  if (demo) {
    CouplingConfig cc;
    cc.method = parse_method(o.method);
    cc.frequency_guess = guess;
    cc.train = tc;
    if (cc.train.learning == Learning::kBatch) {
      cc.train.learning = Learning::kJointRecursive;
    }
    rows = run_coupled(*demo, u, dt, cc);
  } else {
    rows = run_oscillator(u, dt, guess, tc.oscillator);
  }

  Sink sink(o.output, out);
  if (demo) {
    constexpr std::string_view kCols[] = {"t", "phi", "Omega", "u", "u_hat",
                                          "qw", "qx", "qy", "qz"};
    write_csv_header(sink.get(), kCols);
  } else {
    constexpr std::string_view kCols[] = {"t", "phi", "Omega", "u", "u_hat"};
    write_csv_header(sink.get(), kCols);
  }
  for (const CoupledSample& r : rows) {
    std::vector<double> row{t0 + r.t, r.phi, r.omega, r.u, r.u_hat};
    if (r.q) {
      const Eigen::Vector4d c = r.q->coeffs();
      row.insert(row.end(), c.data(), c.data() + 4);
    }
    write_csv_row(sink.get(), row);
  }
  sink.close();
  if (o.output != "-") summary(out, "final_omega", rows.back().omega);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  Options o;
  CLI::App app{"Periodic orientation DMPs: generate, train, rollout, oscillate",
               "pdmp"};
  app.set_config("--config", "", "Flat key=value file; keys are flag names");
  app.require_subcommand(1);

  app.add_option("--input", o.input, "Input CSV or model file");
  app.add_option("--output", o.output, "Output path, '-' for stdout");
  app.add_option("--demo", o.demo, "Demonstration CSV (oscillate)");
  app.add_option("--method", o.method, "rmp | qp")
      ->check(CLI::IsMember({"rmp", "qp"}));
  app.add_option("--goal", o.goal, "mean | identity | zero")
      ->check(CLI::IsMember({"mean", "identity", "zero"}));
  app.add_option("--learner", o.learner, "ls | lwr | rls | rls-kernel")
      ->check(CLI::IsMember({"ls", "lwr", "rls", "rls-kernel"}));
  app.add_option("--dt", o.dt, "Time step (s)")->check(CLI::PositiveNumber);
  app.add_option("--cycles", o.cycles, "Number of periods")
      ->check(CLI::PositiveNumber);
  app.add_option("--kernels", o.kernels, "Number of kernels N")
      ->check(CLI::Range(2, 100000));
  app.add_option("--width", o.width, "Kernel width h (default 2.5 N)")
      ->check(CLI::PositiveNumber);
  app.add_option("--alpha-z", o.alpha_z, "Gain alpha_z (beta_z = alpha_z/4)")
      ->check(CLI::PositiveNumber);
  app.add_option("--lambda", o.lambda, "RLS forgetting factor")
      ->check(CLI::Range(1e-9, 1.0));
  app.add_option("--passes", o.passes, "RLS passes over the demo")
      ->check(CLI::Range(1, 100000));
  app.add_option("--omega", o.omega,
                 "Frequency (rad/s); initial guess for oscillate")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "Noise seed (generate)");
  app.add_option("--noise", o.noise, "Tangent noise std dev (generate)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--perturb", o.perturb,
                 "Start rotation: one value (about x) or three")
      ->expected(1, 3);
  app.add_option("--amplitude", o.amplitude, "Amplitude diagonal (3 values)")
      ->expected(3);
  app.add_option("--center", o.center, "Generator center w x y z")
      ->expected(4);
  app.add_option("--harmonic", o.harmonics,
                 "Generator term: multiple ax ay az px py pz (repeatable)")
      ->expected(7);
  app.add_option("--oscillator-K", o.osc_coupling, "Oscillator coupling K")
      ->check(CLI::PositiveNumber);
  app.add_option("--oscillator-M", o.osc_harmonics, "Oscillator harmonics M")
      ->check(CLI::Range(0, 1000));
  app.add_option("--oscillator-eta", o.osc_rate, "Oscillator learning rate")
      ->check(CLI::PositiveNumber);

  auto* generate = app.add_subcommand("generate", "Write a synthetic demo");
  auto* train = app.add_subcommand("train", "Fit a model to a demo");
  auto* rollout = app.add_subcommand("rollout", "Integrate a saved model");
  auto* oscillate =
      app.add_subcommand("oscillate", "Adaptive oscillator, optionally coupled");
  for (auto* sub : {generate, train, rollout, oscillate}) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (*generate) return cmd_generate(o, out);
    if (*train) return cmd_train(o, out);
    if (*rollout) return cmd_rollout(o, out);
    return cmd_oscillate(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const Error& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumerical;
  }
}

}  // namespace pdmp::cli
