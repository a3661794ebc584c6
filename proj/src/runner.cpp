#include "heisen/runner.hpp"

#include <algorithm>
#include <iostream>

#include "heisen/analysis.hpp"
#include "heisen/correlation.hpp"
#include "heisen/flow.hpp"
#include "heisen/serialize.hpp"

namespace heisen::cli {

namespace {

using iet::IetMap;
using iet::IetSpec;

double parseNumber(const std::string& s, const char* what) {
  try {
    return Rational::parse(s).toDouble();
  } catch (const std::exception&) {
    try {
      return std::stod(s);
    } catch (...) {
      throw Error(Err::ParseError,
                  std::string(what) + ": bad numeric literal '" + s + "'");
    }
  }
}

Eigen::VectorXd parseVector(const std::vector<std::string>& xs, const char* what) {
  Eigen::VectorXd v(static_cast<int>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i)
    v[static_cast<int>(i)] = parseNumber(xs[i], what);
  return v;
}

/// Offsets solving the orbit constraints for a given h, deterministic in seed.
Eigen::VectorXd sampleOffsetsForHeights(const IetSpec<double>& spec,
                                        const Eigen::VectorXd& h,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  const int d = spec.size();
  Eigen::VectorXd b(d);
  for (int i = 0; i < d; ++i) b[i] = uniform01(rng);
  const auto constraints = bundle::admissibleBSpace(spec, h);
  const int m = static_cast<int>(constraints.size());
  if (m > 0) {
    Eigen::MatrixXd c(m, d);
    Eigen::VectorXd delta(m);
    for (int i = 0; i < m; ++i) {
      c.row(i) = constraints[i].coeffs.transpose();
      delta[i] = wrapHalf(constraints[i].rhs - constraints[i].coeffs.dot(b));
    }
    b += c.transpose() * (c * c.transpose()).ldlt().solve(delta);
  }
  for (int i = 0; i < d; ++i) b[i] = wrap01(b[i]);
  return b;
}

struct Context {
  ExperimentConfig cfg;
  std::string command;
  std::string hash;
  std::string outDir;
  bool wantJson = true;
  bool wantCsv = true;
  int threads = 1;

  IetMap<double> map;
  std::optional<Eigen::VectorXd> tau, h, b;
  std::optional<bundle::SkewProduct> sp;

  std::string path(const std::string& ext) const {
    return artifactPath(outDir, command, hash, ext);
  }
};

Context makeContext(const std::string& command, ExperimentConfig cfg,
                    const RunOptions& opts) {
  Context ctx;
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.outDir) cfg.outputDirectory = *opts.outDir;
  if (opts.format) cfg.formats = *opts.format;
  ctx.command = command;
  ctx.threads = std::max(1, opts.threads);
  ctx.outDir = cfg.outputDirectory;
  ctx.wantJson = cfg.formats != "csv";
  ctx.wantCsv = cfg.formats != "json";
  ctx.hash = specHash(cfg, command);

  ctx.map = IetMap<double>::fromSpec(iet::validateIet<double>(cfg.surface));

  if (cfg.tau) {
    susp::VectorX<double> tau = parseVector(*cfg.tau, "tau");
    ctx.h = susp::heightsFromTau<double>(ctx.map.spec.mono, tau);
    ctx.tau = tau;
  } else if (cfg.heights) {
    Eigen::VectorXd h = parseVector(*cfg.heights, "h");
    auto member = susp::heightsConeContains<double>(ctx.map.spec.mono, h);
    if (!member.contains)
      throw Error(Err::HeightsNotInCone, "h is not realized by any suspension");
    ctx.h = h;
    ctx.tau = member.witness;
  }

  if (cfg.offsets) {
    ctx.b = parseVector(*cfg.offsets, "b");
  } else if (cfg.sampleOffsets) {
    if (ctx.h) {
      ctx.b = sampleOffsetsForHeights(ctx.map.spec, *ctx.h, cfg.seed);
    } else {
      auto s = bundle::sampleAdmissible(ctx.map.spec, cfg.seed);
      ctx.tau = s.tau;
      ctx.h = s.h;
      ctx.b = s.b;
    }
  }
  ctx.cfg = std::move(cfg);
  return ctx;
}

const bundle::SkewProduct& skewOf(Context& ctx) {
  if (!ctx.sp) {
    if (!ctx.h)
      throw Error(Err::ValidationError,
                  "this command needs a [suspension] section (tau or h)");
    Eigen::VectorXd b =
        ctx.b ? *ctx.b : Eigen::VectorXd::Zero(ctx.map.size());
    ctx.sp = bundle::buildSkewProduct(ctx.map, *ctx.h, b);
    ctx.b = ctx.sp->offsets;
  }
  return *ctx.sp;
}

Json vectorJson(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json configEcho(const Context& ctx) {
  Json j;
  j["alphabet"] = ctx.map.spec.symbols;  // pi0-ascending
  j["monodromy"] = ctx.map.spec.mono;
  Json lam = Json::array();
  for (int i = 0; i < ctx.map.size(); ++i) lam.push_back(ctx.map.spec.lengths[i]);
  j["lambda"] = lam;
  j["lambdaLiterals"] = ctx.cfg.surface.lengths;  // exact forms kept as strings
  if (ctx.tau) j["tau"] = vectorJson(*ctx.tau);
  if (ctx.h) j["h"] = vectorJson(*ctx.h);
  if (ctx.b) j["b"] = vectorJson(*ctx.b);
  j["seed"] = std::to_string(ctx.cfg.seed);
  j["specHash"] = ctx.hash;
  j["exactLengths"] = ctx.cfg.exactLengths;
  return j;
}

skew::ModeObservable observableFrom(const Context& ctx, const std::string& prefix,
                                    int fallbackMode) {
  const int mode =
      static_cast<int>(ctx.cfg.runInt(prefix + "mode", fallbackMode));
  const std::string profile = ctx.cfg.runValue(prefix + "profile", "const");
  if (profile == "const") return skew::ModeObservable::constant(mode);
  if (profile == "indicator") {
    const double lo = ctx.cfg.runNumber(prefix + "lo", 0.0);
    const double hi = ctx.cfg.runNumber(prefix + "hi", ctx.map.total());
    return skew::ModeObservable::indicator(mode, lo, hi);
  }
  throw Error(Err::ValidationError,
              "run." + prefix + "profile must be const or indicator");
}

// ---------------------------------------------------------------------------

int cmdValidate(Context& ctx) {
  Json j = configEcho(ctx);
  j["irreducible"] = true;
  Eigen::MatrixXi omega = iet::omegaMatrix(ctx.map.spec.mono);
  Json om = Json::array();
  for (int i = 0; i < omega.rows(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < omega.cols(); ++k) row.push_back(omega(i, k));
    om.push_back(row);
  }
  j["omega"] = om;
  j["w"] = vectorJson(ctx.map.w);
  j["breakpoints"] = vectorJson(ctx.map.breakpoints);
  auto sing = iet::sigmaPermutation(ctx.map.spec.mono);
  j["sigma"] = sing.sigma;
  j["sigmaOrbits"] = sing.orbits;
  Json kb = Json::array();
  for (const auto& v : iet::kernelBasis(ctx.map.spec.mono)) {
    Json kv = Json::array();
    for (int i = 0; i < v.size(); ++i) kv.push_back(v[i]);
    kb.push_back(kv);
  }
  j["kernelBasis"] = kb;
  if (ctx.cfg.exactLengths)
    iet::validateIet<Rational>(ctx.cfg.surface);  // exact path re-validation
  if (ctx.wantJson) writeJson(ctx.path("json"), j);
  if (ctx.wantCsv) {
    CsvTable t;
    t.header = {"symbol", "lambda", "w", "breakpoint"};
    for (int i = 0; i < ctx.map.size(); ++i)
      t.row({ctx.map.spec.symbols[i], fmtDouble(ctx.map.spec.lengths[i]),
             fmtDouble(ctx.map.w[i]), fmtDouble(ctx.map.breakpoints[i])});
    writeCsv(ctx.path("csv"), t);
  }
  return 0;
}

int cmdSuspend(Context& ctx) {
  if (!ctx.tau)
    throw Error(Err::ValidationError, "suspend needs a [suspension] section");
  susp::VectorX<double> tau = *ctx.tau;
  auto s = susp::buildZipperedRectangles<double>(ctx.map.spec, tau);
  susp::boundaryAudit(s);

  Json j = configEcho(ctx);
  j["area"] = s.area;
  j["heights"] = vectorJson(s.heights);
  j["singularityOrbits"] = s.singularities.orbits;
  auto rectJson = [](const susp::Rect& r) {
    return Json{{"x0", r.x0}, {"x1", r.x1}, {"y0", r.y0}, {"y1", r.y1}};
  };
  auto segJson = [](const susp::VSegment& v) {
    return Json{{"x", v.x}, {"y0", v.y0}, {"y1", v.y1}};
  };
  Json rt = Json::array(), rb = Json::array(), gl = Json::array();
  for (int i = 0; i < ctx.map.size(); ++i) {
    Json a = rectJson(s.top[i]);
    a["symbol"] = ctx.map.spec.symbols[i];
    rt.push_back(a);
    Json b = rectJson(s.bottom[i]);
    b["symbol"] = ctx.map.spec.symbols[i];
    rb.push_back(b);
    gl.push_back(Json{{"symbol", ctx.map.spec.symbols[i]},
                      {"dx", s.gluings[i].dx},
                      {"dy", s.gluings[i].dy}});
  }
  j["rectanglesTop"] = rt;
  j["rectanglesBottom"] = rb;
  j["gluings"] = gl;
  Json st = Json::array(), sb = Json::array();
  for (const auto& v : s.slitTop) st.push_back(segJson(v));
  for (const auto& v : s.slitBottom) sb.push_back(segJson(v));
  j["slitsTop"] = st;
  j["slitsBottom"] = sb;
  j["outerSegment"] = segJson(s.outer);
  j["extraSegment"] = s.stilde ? segJson(*s.stilde) : Json();
  if (ctx.wantJson) writeJson(ctx.path("json"), j);
  if (ctx.wantCsv) {
    CsvTable t;
    t.header = {"side", "symbol", "x0", "x1", "y0", "y1"};
    for (int i = 0; i < ctx.map.size(); ++i) {
      t.row({"top", ctx.map.spec.symbols[i], fmtDouble(s.top[i].x0),
             fmtDouble(s.top[i].x1), fmtDouble(s.top[i].y0),
             fmtDouble(s.top[i].y1)});
      t.row({"bottom", ctx.map.spec.symbols[i], fmtDouble(s.bottom[i].x0),
             fmtDouble(s.bottom[i].x1), fmtDouble(s.bottom[i].y0),
             fmtDouble(s.bottom[i].y1)});
    }
    writeCsv(ctx.path("csv"), t);
  }
  return 0;
}

int cmdAdmissible(Context& ctx) {
  if (!ctx.h)
    throw Error(Err::ValidationError, "admissible needs a [suspension] section");
  const auto constraints = bundle::admissibleBSpace(ctx.map.spec, *ctx.h);
  Json j = configEcho(ctx);
  j["area"] = ctx.map.spec.lengths.dot(*ctx.h);
  Json cs = Json::array();
  for (const auto& c : constraints)
    cs.push_back(Json{{"orbit", ctx.map.spec.mono.size() == 0 ? 0 : c.orbitIndex},
                      {"coeffs", vectorJson(c.coeffs)},
                      {"rhs", c.rhs}});
  j["constraints"] = cs;
  j["codimension"] = constraints.size();
  if (ctx.b) {
    auto rep = bundle::isAdmissible(ctx.map.spec, *ctx.h, *ctx.b);
    j["report"] = Json{{"heightsInCone", rep.heightsInCone},
                       {"weilIntegral", rep.weilIntegral},
                       {"constraintResiduals", rep.constraintResiduals},
                       {"admissible", rep.admissible()}};
  }
  if (ctx.wantJson) writeJson(ctx.path("json"), j);
  if (ctx.wantCsv) {
    CsvTable t;
    t.header = {"constraint", "rhs"};
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      std::string coeffs;
      for (int k = 0; k < constraints[i].coeffs.size(); ++k) {
        if (k) coeffs += ' ';
        coeffs += fmtDouble(constraints[i].coeffs[k]);
      }
      t.row({coeffs, fmtDouble(constraints[i].rhs)});
    }
    writeCsv(ctx.path("csv"), t);
  }
  return 0;
}

int cmdIterate(Context& ctx) {
  const std::string kind = ctx.cfg.runValue("kind", "map");
  const std::int64_t steps = ctx.cfg.runInt("steps", 1000);
  const double x0 = ctx.cfg.runNumber("x0", 0.1 * ctx.map.total());
  const double rho0 = ctx.cfg.runNumber("rho0", 0.0);
  Json meta = configEcho(ctx);
  meta["kind"] = kind;
  meta["steps"] = steps;

  bool reliable = true;
  if (kind == "flow") {
    const auto& sp = skewOf(ctx);
    std::vector<double> times = ctx.cfg.runNumbers("times", {});
    if (times.empty()) {
      const double tmax = ctx.cfg.runNumber("tmax", 10.0);
      for (std::int64_t i = 0; i <= steps; ++i)
        times.push_back(tmax * static_cast<double>(i) / steps);
    }
    CsvTable t;
    t.header = {"t", "alpha", "x", "s", "rho"};
    flow::FlowState st = flow::stateOnSection(sp, x0, rho0);
    double now = 0;
    for (double target : times) {
      auto r = flow::flowVertical(sp, st, target - now);
      reliable = reliable && !r.nearDiscontinuity;
      st = r.state;
      now = target;
      t.row({fmtDouble(target), ctx.map.spec.symbols[st.symbol], fmtDouble(st.x),
             fmtDouble(st.s), fmtDouble(st.rho)});
    }
    writeCsv(ctx.path("csv"), t);  // the trajectory is the data artifact
  } else if (kind == "map") {
    if (ctx.cfg.hasSuspension() || ctx.b) {
      const auto& sp = skewOf(ctx);
      auto orbit = skew::skewOrbit(sp, {x0, rho0}, steps);
      reliable = orbit.reliable;
      CsvTable t;
      t.header = {"n", "x", "rho"};
      for (std::size_t k = 0; k < orbit.points.size(); ++k)
        t.row({std::to_string(k), fmtDouble(orbit.points[k].x),
               fmtDouble(orbit.points[k].rho)});
      writeCsv(ctx.path("csv"), t);
    } else if (ctx.cfg.exactLengths) {
      // exact-arithmetic base path, the oracle for the floating iterates
      auto rmap = iet::IetMap<Rational>::fromSpec(
          iet::validateIet<Rational>(ctx.cfg.surface));
      Rational rx0 = Rational::parse(ctx.cfg.runValue("x0", "1/10"));
      auto orbit = iet::ietOrbit<Rational>(rmap, rx0, steps);
      meta["exactArithmetic"] = true;
      CsvTable t;
      t.header = {"n", "x", "exact"};
      t.row({"0", fmtDouble(rx0.toDouble()), rx0.str()});
      for (std::size_t k = 0; k < orbit.points.size(); ++k)
        t.row({std::to_string(k + 1), fmtDouble(orbit.points[k].toDouble()),
               orbit.points[k].str()});
      writeCsv(ctx.path("csv"), t);
      reliable = orbit.reliable;
    } else {
      auto orbit = iet::ietOrbit<double>(ctx.map, x0, steps);
      reliable = orbit.reliable;
      CsvTable t;
      t.header = {"n", "x"};
      t.row({"0", fmtDouble(x0)});
      for (std::size_t k = 0; k < orbit.points.size(); ++k)
        t.row({std::to_string(k + 1), fmtDouble(orbit.points[k])});
      writeCsv(ctx.path("csv"), t);
    }
  } else {
    throw Error(Err::ValidationError, "run.kind must be map or flow");
  }
  meta["reliable"] = reliable;
  writeJson(ctx.path("json"), meta);  // sidecar carries the guard flag
  if (!reliable) {
    std::cerr << "iterate: orbit grazed a discontinuity (guard "
              << iet::kGuardEps << ")\n";
    return 3;
  }
  return 0;
}

int cmdBirkhoff(Context& ctx) {
  const auto& sp = skewOf(ctx);
  auto obs = observableFrom(ctx, "", 1);
  const std::int64_t steps = ctx.cfg.runInt("steps", 100000);
  const double x0 = ctx.cfg.runNumber("x0", 0.1 * ctx.map.total());
  const double rho0 = ctx.cfg.runNumber("rho0", 0.0);
  auto r = skew::birkhoffAverage(sp, obs, {x0, rho0}, steps);
  Json j = configEcho(ctx);
  j["observable"] = Json{{"mode", obs.mode}, {"profile", obs.description}};
  j["steps"] = steps;
  j["mean"] = complexJson(r.mean);
  j["meanAbs"] = std::abs(r.mean);
  j["reliable"] = r.reliable;
  Json trace = Json::array();
  for (const auto& [n, v] : r.trace)
    trace.push_back(Json{{"n", n}, {"re", v.real()}, {"im", v.imag()}});
  j["trace"] = trace;
  if (ctx.wantJson) writeJson(ctx.path("json"), j);
  if (ctx.wantCsv) {
    CsvTable t;
    t.header = {"n", "re", "im", "abs"};
    for (const auto& [n, v] : r.trace)
      t.row({std::to_string(n), fmtDouble(v.real()), fmtDouble(v.imag()),
             fmtDouble(std::abs(v))});
    writeCsv(ctx.path("csv"), t);
  }
  return r.reliable ? 0 : 3;
}

corr::CorrelationSeries computeSeries(Context& ctx) {
  const auto& sp = skewOf(ctx);
  auto f = observableFrom(ctx, "f", 1);
  auto g = observableFrom(ctx, "g", f.mode);
  const std::int64_t nMax = ctx.cfg.runInt("nmax", 256);
  const std::string method = ctx.cfg.runValue("method", "grid");
  corr::CorrelationSeries series;
  if (method == "grid") {
    series = corr::correlationSeriesGrid(sp, f, g, nMax, ctx.threads);
  } else if (method == "mc") {
    const std::int64_t samples = ctx.cfg.runInt("samples", 200000);
    series = corr::correlationSeriesMonteCarlo(sp, f, g, nMax, samples,
                                               ctx.cfg.seed, ctx.threads);
  } else {
    throw Error(Err::ValidationError, "run.method must be grid or mc");
  }
  series.specHash = ctx.hash;
  return series;
}

Json seriesMeta(const Context& ctx, const corr::CorrelationSeries& series) {
  Json j = configEcho(ctx);
  j["method"] =
      series.method == corr::CorrelationSeries::Method::Grid ? "grid" : "mc";
  j["nmax"] = series.values.size() - 1;
  if (series.method == corr::CorrelationSeries::Method::Grid)
    j["mesh"] = series.meshSize;
  else
    j["samples"] = series.sampleCount;
  return j;
}

int cmdCorrelate(Context& ctx) {
  auto series = computeSeries(ctx);
  CsvTable t;
  t.header = {"n", "re", "im", "abs"};
  const bool mc = series.method == corr::CorrelationSeries::Method::MonteCarlo;
  if (mc) t.header.push_back("stderr");
  for (std::size_t n = 0; n < series.values.size(); ++n) {
    std::vector<std::string> row{std::to_string(n),
                                 fmtDouble(series.values[n].real()),
                                 fmtDouble(series.values[n].imag()),
                                 fmtDouble(std::abs(series.values[n]))};
    if (mc) row.push_back(fmtDouble(series.stderrs[n]));
    t.rows.push_back(std::move(row));
  }
  writeCsv(ctx.path("csv"), t);  // the series itself is the CSV artifact
  writeJson(ctx.path("json"), seriesMeta(ctx, series));  // metadata sidecar
  return 0;
}

int cmdSpectrum(Context& ctx) {
  auto series = computeSeries(ctx);
  const std::int64_t nMax = static_cast<std::int64_t>(series.values.size()) - 1;
  const int window =
      static_cast<int>(ctx.cfg.runInt("window", std::min<std::int64_t>(nMax, 256)));
  auto est = analysis::spectralDensity(series.values, window, ctx.hash);
  const int atomGrid = static_cast<int>(ctx.cfg.runInt("atomgrid", 256));
  auto probe = analysis::atomProbe(series.values, atomGrid);
  auto sq = analysis::squareSummabilityReport(series.values);

  Json j = seriesMeta(ctx, series);
  j["window"] = est.window;
  j["windowLength"] = est.windowLength;
  j["negativeLobe"] = est.negativeLobe;
  j["totalMass"] = est.totalMass;
  Json probes = Json::array();
  for (const auto& [n, v] : probe.maxByN)
    probes.push_back(Json{{"N", n}, {"max", v}});
  j["atomProbe"] = Json{{"byN", probes},
                        {"finalMax", probe.finalMax},
                        {"argLambda", probe.finalArgLambda}};
  Json sums = Json::array();
  for (const auto& [n, v] : sq.checkpoints)
    sums.push_back(Json{{"N", n}, {"sum", v}});
  j["squareSums"] = Json{{"checkpoints", sums},
                         {"lastIncrement", sq.lastIncrement},
                         {"decaying", sq.decaying}};
  if (ctx.wantJson) writeJson(ctx.path("json"), j);
  if (ctx.wantCsv) {
    CsvTable t;
    t.header = {"lambda", "density", "raw"};
    for (std::size_t i = 0; i < est.frequencies.size(); ++i)
      t.row({fmtDouble(est.frequencies[i]), fmtDouble(est.density[i]),
             fmtDouble(est.raw[i])});
    writeCsv(ctx.path("csv"), t);
  }
  return 0;
}

int cmdRokhlin(Context& ctx) {
  std::vector<double> heights = ctx.cfg.runNumbers("heights", {100, 1000, 10000});
  std::vector<double> lambdas = ctx.cfg.runNumbers("lambdas", {0.1, 0.3, 0.7});
  const double x0 = ctx.cfg.runNumber("x0", ctx.map.total() / 7.0);
  Json j = configEcho(ctx);
  Json rows = Json::array();
  CsvTable t;
  t.header = {"height", "lambda", "defect", "bound", "delta"};
  for (double hgt : heights) {
    for (double lam : lambdas) {
      auto r = analysis::rokhlinEigenfunction(ctx.map, lam,
                                              static_cast<int>(hgt), x0);
      rows.push_back(Json{{"height", static_cast<int>(hgt)},
                          {"lambda", lam},
                          {"defect", r.defect},
                          {"bound", r.bound},
                          {"delta", r.tower.delta},
                          {"withinBound", r.defect <= r.bound + 1e-3}});
      t.row({std::to_string(static_cast<int>(hgt)), fmtDouble(lam),
             fmtDouble(r.defect), fmtDouble(r.bound), fmtDouble(r.tower.delta)});
    }
  }
  j["towers"] = rows;
  if (ctx.wantJson) writeJson(ctx.path("json"), j);
  if (ctx.wantCsv) writeCsv(ctx.path("csv"), t);
  return 0;
}

int cmdCohom(Context& ctx) {
  const auto& sp = skewOf(ctx);
  const int mode = static_cast<int>(ctx.cfg.runInt("mode", 1));
  std::vector<double> basis = ctx.cfg.runNumbers("basis", {8, 16, 32, 64});
  const std::int64_t orbit = ctx.cfg.runInt("orbit", 4096);
  const double x0 = ctx.cfg.runNumber("x0", 0.123456789 * ctx.map.total());
  auto g = [&sp](double x) { return sp.skewing(x, sp.base.symbolAt(x)); };

  Json j = configEcho(ctx);
  Json rows = Json::array();
  CsvTable t;
  t.header = {"basis", "residual", "normalized", "illConditioned"};
  double prev = -1;
  bool nonDecreasingToZero = true;
  for (double bsz : basis) {
    auto rep = analysis::cohomologicalResidual(sp.base, g, mode,
                                               static_cast<int>(bsz), orbit, x0);
    rows.push_back(Json{{"basis", rep.basisSize},
                        {"residual", rep.residual},
                        {"normalized", rep.normalized},
                        {"illConditioned", rep.illConditioned}});
    t.row({std::to_string(rep.basisSize), fmtDouble(rep.residual),
           fmtDouble(rep.normalized), rep.illConditioned ? "1" : "0"});
    if (prev >= 0 && rep.residual < 0.25 * prev) nonDecreasingToZero = false;
    prev = rep.residual;
  }
  j["mode"] = mode;
  j["orbitLength"] = orbit;
  j["sweep"] = rows;
  j["residualCollapses"] = !nonDecreasingToZero;
  if (ctx.wantJson) writeJson(ctx.path("json"), j);
  if (ctx.wantCsv) writeCsv(ctx.path("csv"), t);
  return 0;
}

int cmdCommutator(Context& ctx) {
  const auto& sp = skewOf(ctx);
  std::vector<double> ts = ctx.cfg.runNumbers("tsweep", {1e-3, 1e-2, 1e-1});
  const double defaultX =
      ctx.map.breakpoints[0] + 0.6 * ctx.map.spec.lengths[0];
  const double x = ctx.cfg.runNumber("x", defaultX);
  flow::FlowState st = flow::stateOnSection(sp, x, 0.0);
  st.s = ctx.cfg.runNumber("s", 0.5 * sp.slopes[st.symbol]);

  Json j = configEcho(ctx);
  CsvTable t;
  t.header = {"t", "shift", "tsq", "diff"};
  double worst = 0;
  for (double tv : ts) {
    const double shift = flow::commutatorShift(sp, st, tv);
    const double diff = circDist(shift, tv * tv);
    worst = std::max(worst, diff);
    t.row({fmtDouble(tv), fmtDouble(shift), fmtDouble(tv * tv), fmtDouble(diff)});
  }
  j["maxDiff"] = worst;
  j["state"] = Json{{"x", st.x}, {"s", st.s}};
  if (ctx.wantJson) writeJson(ctx.path("json"), j);
  if (ctx.wantCsv) writeCsv(ctx.path("csv"), t);
  return 0;
}

}  // namespace

int runSubcommand(const std::string& name, ExperimentConfig cfg,
                  const RunOptions& opts) {
  try {
    Context ctx = makeContext(name, std::move(cfg), opts);
    ensureDirectory(ctx.outDir);
    if (name == "validate") return cmdValidate(ctx);
    if (name == "suspend") return cmdSuspend(ctx);
    if (name == "admissible") return cmdAdmissible(ctx);
    if (name == "iterate") return cmdIterate(ctx);
    if (name == "birkhoff") return cmdBirkhoff(ctx);
    if (name == "correlate") return cmdCorrelate(ctx);
    if (name == "spectrum") return cmdSpectrum(ctx);
    if (name == "rokhlin") return cmdRokhlin(ctx);
    if (name == "cohom") return cmdCohom(ctx);
    if (name == "commutator") return cmdCommutator(ctx);
    std::cerr << "unknown subcommand '" << name << "'\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return isValidationError(e.kind()) ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace heisen::cli
