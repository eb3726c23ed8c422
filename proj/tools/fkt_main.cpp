// Command-line surface for the fast kernel transform library: single
// multiplies against CSV data, scaling benchmarks, expansion error studies,
// and Gaussian-process posterior-mean runs. Results are emitted as CSV tables
// (stdout or --output) plus an optional JSON run record.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fkt/gp.hpp"
#include "fkt/io.hpp"
#include "fkt/synthetic.hpp"
#include "fkt/transform.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

struct RunConfig {
  std::string kernel = "matern12";
  std::vector<std::string> kernelParams;
  int dim = 3;
  int p = 4;
  double theta = 0.75;
  int leafCapacity = 512;
  std::string compress = "auto";
  std::uint64_t seed = 42;
  int threads = 0;
  bool dense = false;
  std::string input, output, jsonOut, configPath;
  std::string synthetic = "sphere";
  int n = 10000;
};

double nowSeconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

fkt::IsotropicKernel::Params parseKernelParams(const std::vector<std::string>& entries) {
  fkt::IsotropicKernel::Params params;
  for (const auto& entry : entries) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--kernel-param", "expected name=value, got '" + entry + "'");
    try {
      params[entry.substr(0, eq)] = std::stod(entry.substr(eq + 1));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--kernel-param", "non-numeric value in '" + entry + "'");
    }
  }
  return params;
}

fkt::CompressionMode parseCompress(const std::string& mode) {
  if (mode == "auto") return fkt::CompressionMode::Auto;
  if (mode == "on") return fkt::CompressionMode::On;
  if (mode == "off") return fkt::CompressionMode::Off;
  throw CLI::ValidationError("--compress", "must be auto, on, or off");
}

fkt::PointCloud makeSynthetic(const std::string& kind, int n, int d, fkt::Rng& rng) {
  if (kind == "sphere") return fkt::sphereSurfaceCloud(n, d, rng);
  if (kind == "cube") return fkt::cubeCloud(n, d, rng);
  if (kind == "gaussian-mixture") return fkt::gaussianMixtureCloud(n, d, rng);
  throw CLI::ValidationError("--synthetic", "must be sphere, cube, or gaussian-mixture");
}

fkt::FktOptions toOptions(const RunConfig& config) {
  fkt::FktOptions options;
  options.p = config.p;
  options.theta = config.theta;
  options.leafCapacity = config.leafCapacity;
  options.compression = parseCompress(config.compress);
  options.threads = config.threads;
  return options;
}

void echoConfig(fkt::ResultRecord& record, const RunConfig& config) {
  record.columns.insert(record.columns.begin(),
                        {"kernel", "dim", "p", "theta", "leaf_capacity", "compress", "seed"});
  for (auto& row : record.rows)
    row.insert(row.begin(),
               {config.kernel, std::to_string(config.dim), std::to_string(config.p),
                fkt::formatDouble(config.theta), std::to_string(config.leafCapacity), config.compress,
                std::to_string(config.seed)});
}

void emitRecord(const fkt::ResultRecord& record, const RunConfig& config) {
  if (config.output.empty())
    record.writeCsv(std::cout);
  else
    record.writeCsv(config.output);
  if (!config.jsonOut.empty()) {
    std::ofstream out(config.jsonOut);
    if (!out) throw fkt::IoError("cannot write '" + config.jsonOut + "'");
    out << record.toJson() << "\n";
  }
}

// Merge --config JSON values under the command-line flags (flags win).
void applyConfigFile(CLI::App* cmd, RunConfig& config) {
  if (config.configPath.empty()) return;
  std::ifstream in(config.configPath);
  if (!in) throw fkt::IoError("cannot open config '" + config.configPath + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw fkt::ParseError(config.configPath + ": " + e.what());
  }
  auto overrideIf = [&](const char* flag, auto& field) {
    if (j.contains(flag) && cmd->count(std::string("--") + flag) == 0) j.at(flag).get_to(field);
  };
  overrideIf("kernel", config.kernel);
  overrideIf("dim", config.dim);
  overrideIf("p", config.p);
  overrideIf("theta", config.theta);
  overrideIf("leaf-capacity", config.leafCapacity);
  overrideIf("compress", config.compress);
  overrideIf("seed", config.seed);
  overrideIf("threads", config.threads);
  overrideIf("synthetic", config.synthetic);
  overrideIf("n", config.n);
}

void addCommonFlags(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--kernel", config.kernel, "kernel name");
  cmd->add_option("--kernel-param", config.kernelParams, "kernel parameter name=value (repeatable)");
  cmd->add_option("--dim", config.dim, "ambient dimension");
  cmd->add_option("--p", config.p, "truncation order");
  cmd->add_option("--theta", config.theta, "distance admissibility parameter in (0,1)");
  cmd->add_option("--leaf-capacity", config.leafCapacity, "maximum points per leaf");
  cmd->add_option("--compress", config.compress, "radial compression: auto|on|off");
  cmd->add_option("--seed", config.seed, "random seed for synthetic data");
  cmd->add_option("--threads", config.threads, "worker threads (0 = hardware)");
  cmd->add_flag("--dense", config.dense, "also run the dense reference path");
  cmd->add_option("--input", config.input, "input points CSV");
  cmd->add_option("--output", config.output, "output CSV path (stdout when omitted)");
  cmd->add_option("--json-out", config.jsonOut, "write a JSON run record here");
  cmd->add_option("--config", config.configPath, "JSON config file (flags take precedence)");
  cmd->add_option("--synthetic", config.synthetic, "generator: sphere|cube|gaussian-mixture");
  cmd->add_option("--n", config.n, "synthetic point count");
}

int runMvm(CLI::App* cmd, RunConfig& config, const std::string& yPath, const std::string& yFill,
           const std::string& zOut) {
  applyConfigFile(cmd, config);
  fkt::Rng rng(config.seed);
  fkt::PointCloud cloud;
  if (!config.input.empty()) {
    auto ingested = fkt::ingestPoints(config.input, config.dim);
    cloud = std::move(ingested.cloud);
    config.dim = cloud.d;
  } else {
    cloud = makeSynthetic(config.synthetic, config.n, config.dim, rng);
  }

  std::vector<double> y;
  if (!yPath.empty()) {
    auto table = fkt::readCsv(yPath);
    for (const auto& row : table.rows) y.push_back(row.at(0));
    if (static_cast<int>(y.size()) != cloud.n)
      throw CLI::ValidationError("--y", "vector length does not match the point count");
  } else if (!yFill.empty()) {
    y.assign(static_cast<std::size_t>(cloud.n), std::stod(yFill));
  } else {
    y = fkt::normalVector(cloud.n, rng);
  }

  auto kernel = fkt::makeKernel(config.kernel, parseKernelParams(config.kernelParams));
  const double t0 = nowSeconds();
  fkt::FktPlan plan(cloud, kernel, toOptions(config));
  const double t1 = nowSeconds();
  const auto z = plan.multiply(y);
  const double t2 = nowSeconds();

  double error = std::nan("");
  double denseTime = std::nan("");
  if (config.dense) {
    const double t3 = nowSeconds();
    const auto exact = fkt::denseMultiply(cloud, *kernel, y, std::nullopt, config.threads);
    denseTime = nowSeconds() - t3;
    error = fkt::relativeError(z, exact);
  }
  if (!zOut.empty()) fkt::writeVectorCsv(zOut, z, "z");

  fkt::ResultRecord record;
  record.columns = {"n",          "node_count",   "coefficients", "plan_seconds",
                    "mvm_seconds", "dense_seconds", "rel_l2_error"};
  record.rows.push_back({std::to_string(cloud.n), std::to_string(plan.tree().nodeCount()),
                         std::to_string(plan.coefficientCount()), fkt::formatDouble(t1 - t0),
                         fkt::formatDouble(t2 - t1), fkt::formatDouble(denseTime),
                         fkt::formatDouble(error)});
  echoConfig(record, config);
  emitRecord(record, config);
  if (config.dense && !(error < 1.0)) throw std::runtime_error("numerical failure: error not finite");
  return 0;
}

int runBenchmark(CLI::App* cmd, RunConfig& config, std::vector<int>& nList, int reps, int denseMaxN) {
  applyConfigFile(cmd, config);
  if (nList.empty()) nList = {4096, 8192, 16384, 32768, 65536};
  auto kernel = fkt::makeKernel(config.kernel, parseKernelParams(config.kernelParams));

  fkt::ResultRecord record;
  record.columns = {"n", "tree_seconds", "operator_seconds", "mvm_seconds", "total_seconds",
                    "dense_seconds"};
  for (int n : nList) {
    fkt::Rng rng(config.seed);
    fkt::PointCloud cloud = makeSynthetic(config.synthetic, n, config.dim, rng);
    const auto y = fkt::normalVector(n, rng);

    // Streaming mode: operator work happens inside the multiply, matching the
    // single-pass algorithm; the plan phase is pure tree construction.
    fkt::FktOptions options = toOptions(config);
    options.eagerOperators = false;
    std::vector<double> planTimes, mvmTimes;
    for (int rep = 0; rep <= reps; ++rep) {
      const double t0 = nowSeconds();
      fkt::FktPlan plan(cloud, kernel, options);
      const double t1 = nowSeconds();
      const auto z = plan.multiply(y);
      const double t2 = nowSeconds();
      if (rep == 0) continue;  // warm-up excluded
      planTimes.push_back(t1 - t0);
      mvmTimes.push_back(t2 - t1);
    }
    std::sort(planTimes.begin(), planTimes.end());
    std::sort(mvmTimes.begin(), mvmTimes.end());
    const double planMedian = planTimes[planTimes.size() / 2];
    const double mvmMedian = mvmTimes[mvmTimes.size() / 2];

    double denseTime = std::nan("");
    if (config.dense && n <= denseMaxN) {
      const double t0 = nowSeconds();
      (void)fkt::denseMultiply(cloud, *kernel, y, std::nullopt, config.threads);
      denseTime = nowSeconds() - t0;
    }
    record.rows.push_back({std::to_string(n), fkt::formatDouble(planMedian), fkt::formatDouble(0.0),
                           fkt::formatDouble(mvmMedian), fkt::formatDouble(planMedian + mvmMedian),
                           fkt::formatDouble(denseTime)});
  }
  echoConfig(record, config);
  emitRecord(record, config);
  return 0;
}

int runErrorStudy(CLI::App* cmd, RunConfig& config, const std::string& mode,
                  std::vector<std::string>& kernels, std::vector<int>& dims, std::vector<int>& pList,
                  std::vector<double>& thetaList, int pairs) {
  applyConfigFile(cmd, config);
  if (kernels.empty()) kernels = {"exponential", "cos-over-r", "cauchy", "gaussian"};

  fkt::ResultRecord record;
  if (mode == "expansion") {
    if (dims.empty()) dims = {3, 6, 9, 12};
    if (pList.empty()) pList = {3, 6, 9, 12, 15, 18};
    record.columns = {"study_kernel", "study_dim", "study_p", "max_abs_error", "error_bound"};
    for (const auto& name : kernels) {
      auto kernel = fkt::makeKernel(name, parseKernelParams(config.kernelParams));
      for (int d : dims) {
        for (int p : pList) {
          const auto& table = fkt::coefficientTable(d, p);
          fkt::Rng rng(config.seed);
          double worst = 0.0;
          for (int i = 0; i < pairs; ++i) {
            fkt::PointCloud u = fkt::sphereSurfaceCloud(1, d, rng);
            fkt::PointCloud v = fkt::sphereSurfaceCloud(1, d, rng);
            std::vector<double> src = u.x, tgt = v.x;
            for (double& x : tgt) x *= 2.0;
            double dist2 = 0.0;
            for (int a = 0; a < d; ++a) {
              const double t = src[static_cast<std::size_t>(a)] - tgt[static_cast<std::size_t>(a)];
              dist2 += t * t;
            }
            const double approx = fkt::truncatedKernel(*kernel, table, p, src, tgt);
            worst = std::max(worst, std::abs(approx - kernel->evalPositive(std::sqrt(dist2))));
          }
          const double bound = fkt::truncationErrorBound(*kernel, d, p, 0.5, 2.0);
          record.rows.push_back({name, std::to_string(d), std::to_string(p),
                                 fkt::formatDouble(worst), fkt::formatDouble(bound)});
        }
      }
    }
  } else if (mode == "mvm") {
    if (pList.empty()) pList = {1, 2, 3};
    if (thetaList.empty()) thetaList = {0.25, 0.35, 0.45, 0.55, 0.65, 0.75};
    record.columns = {"method", "study_theta", "mvm_seconds", "rel_l2_error"};
    fkt::Rng rng(config.seed);
    fkt::PointCloud cloud = makeSynthetic(config.synthetic, config.n, config.dim, rng);
    const auto y = fkt::normalVector(config.n, rng);
    auto kernel = fkt::makeKernel(config.kernel, parseKernelParams(config.kernelParams));
    const auto exact = fkt::denseMultiply(cloud, *kernel, y, std::nullopt, config.threads);
    for (double theta : thetaList) {
      fkt::FktOptions options = toOptions(config);
      options.theta = theta;
      options.eagerOperators = false;
      {
        fkt::FktOptions bh = options;
        bh.barnesHut = true;
        fkt::FktPlan plan(cloud, kernel, bh);
        const double t0 = nowSeconds();
        const auto z = fkt::barnesHutMultiply(plan, y);
        const double elapsed = nowSeconds() - t0;
        record.rows.push_back({"barnes-hut", fkt::formatDouble(theta), fkt::formatDouble(elapsed),
                               fkt::formatDouble(fkt::relativeError(z, exact))});
      }
      for (int p : pList) {
        fkt::FktOptions fo = options;
        fo.p = p;
        fkt::FktPlan plan(cloud, kernel, fo);
        const double t0 = nowSeconds();
        const auto z = plan.multiply(y);
        const double elapsed = nowSeconds() - t0;
        record.rows.push_back({"fkt-p" + std::to_string(p), fkt::formatDouble(theta),
                               fkt::formatDouble(elapsed),
                               fkt::formatDouble(fkt::relativeError(z, exact))});
      }
    }
  } else {
    throw CLI::ValidationError("--mode", "must be expansion or mvm");
  }
  echoConfig(record, config);
  emitRecord(record, config);
  return 0;
}

int runGpPredict(CLI::App* cmd, RunConfig& config, const std::string& trainPath,
                 const std::string& testPath, bool noiseColumn, double noiseScalar,
                 double tolerance, int maxIterations, const std::string& predictionsOut) {
  applyConfigFile(cmd, config);
  auto train = fkt::ingestPoints(trainPath, config.dim);
  if (train.extraColumns.empty())
    throw fkt::ParseError(trainPath + ": training file needs a target column after " +
                          std::to_string(config.dim) + " coordinates");
  const std::vector<double>& y = train.extraColumns[0];
  std::vector<double> noise;
  if (noiseColumn) {
    if (train.extraColumns.size() < 2)
      throw fkt::ParseError(trainPath + ": --noise-column requested but no such column exists");
    noise = train.extraColumns[1];
  } else {
    noise.assign(y.size(), noiseScalar);
  }
  auto test = fkt::ingestPoints(testPath, config.dim);
  if (test.cloud.d != train.cloud.d)
    throw CLI::ValidationError("--test", "train/test dimension mismatch");

  auto kernel = fkt::makeKernel(config.kernel, parseKernelParams(config.kernelParams));
  fkt::GpOptions options;
  options.fkt = toOptions(config);
  options.cgTolerance = tolerance;
  options.cgMaxIterations = maxIterations;
  const double t0 = nowSeconds();
  const auto pred = fkt::gpPosteriorMean(train.cloud, y, noise, kernel, test.cloud, options);
  const double elapsed = nowSeconds() - t0;

  double oracleError = std::nan("");
  if (config.dense) {
    fkt::GpOptions denseOptions = options;
    denseOptions.dense = true;
    const auto oracle = fkt::gpPosteriorMean(train.cloud, y, noise, kernel, test.cloud, denseOptions);
    oracleError = fkt::relativeError(pred.mean, oracle.mean);
  }
  if (!predictionsOut.empty()) fkt::writeVectorCsv(predictionsOut, pred.mean, "posterior_mean");

  fkt::ResultRecord record;
  record.columns = {"train_n", "test_n",      "cg_iterations", "cg_residual",
                    "converged", "gp_seconds", "oracle_rel_error"};
  record.rows.push_back({std::to_string(train.cloud.n), std::to_string(test.cloud.n),
                         std::to_string(pred.diagnostics.iterations),
                         fkt::formatDouble(pred.diagnostics.finalResidual),
                         pred.diagnostics.converged ? "1" : "0", fkt::formatDouble(elapsed),
                         fkt::formatDouble(oracleError)});
  echoConfig(record, config);
  emitRecord(record, config);
  if (!pred.diagnostics.converged)
    throw std::runtime_error("numerical failure: conjugate gradients did not converge");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fast kernel transform: quasilinear kernel matrix-vector products"};
  app.require_subcommand(1);

  RunConfig config;

  auto* mvm = app.add_subcommand("mvm", "one matrix-vector multiply");
  std::string yPath, yFill, zOut;
  addCommonFlags(mvm, config);
  mvm->add_option("--y", yPath, "CSV with the input vector (default: seeded normal)");
  mvm->add_option("--y-fill", yFill, "constant fill value for the input vector");
  mvm->add_option("--z-out", zOut, "write the product vector here");

  auto* bench = app.add_subcommand("benchmark", "timing sweep over problem sizes");
  std::vector<int> nList;
  int reps = 3, denseMaxN = 20000;
  addCommonFlags(bench, config);
  bench->add_option("--n-list", nList, "problem sizes to sweep");
  bench->add_option("--reps", reps, "timed repetitions per size (after one warm-up)");
  bench->add_option("--dense-max-n", denseMaxN, "largest size for the dense reference timing");

  auto* study = app.add_subcommand("error-study", "expansion accuracy / accuracy-runtime study");
  std::string mode = "expansion";
  std::vector<std::string> kernels;
  std::vector<int> dims, pList;
  std::vector<double> thetaList;
  int pairs = 1000;
  addCommonFlags(study, config);
  study->add_option("--mode", mode, "expansion|mvm");
  study->add_option("--kernels", kernels, "kernels for the expansion study");
  study->add_option("--dims", dims, "dimensions for the expansion study");
  study->add_option("--p-list", pList, "truncation orders");
  study->add_option("--theta-list", thetaList, "theta sweep for the mvm study");
  study->add_option("--pairs", pairs, "sample pairs per expansion cell");

  auto* gp = app.add_subcommand("gp-predict", "Gaussian-process posterior mean");
  std::string trainPath, testPath, predictionsOut;
  bool noiseColumn = false;
  double noiseScalar = 1e-2, tolerance = 1e-8;
  int maxIterations = 1000;
  addCommonFlags(gp, config);
  gp->add_option("--train", trainPath, "training CSV: coordinates, target[, noise]")->required();
  gp->add_option("--test", testPath, "test CSV: coordinates")->required();
  gp->add_flag("--noise-column", noiseColumn, "read per-point noise from the column after the target");
  gp->add_option("--noise", noiseScalar, "scalar noise variance fallback");
  gp->add_option("--tolerance", tolerance, "CG relative-residual tolerance");
  gp->add_option("--max-iterations", maxIterations, "CG iteration cap");
  gp->add_option("--predictions-out", predictionsOut, "write posterior means here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (mvm->parsed()) return runMvm(mvm, config, yPath, yFill, zOut);
    if (bench->parsed()) return runBenchmark(bench, config, nList, reps, denseMaxN);
    if (study->parsed()) return runErrorStudy(study, config, mode, kernels, dims, pList, thetaList, pairs);
    if (gp->parsed())
      return runGpPredict(gp, config, trainPath, testPath, noiseColumn, noiseScalar, tolerance,
                          maxIterations, predictionsOut);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const fkt::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fkt::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
