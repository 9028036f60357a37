#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>

#include "run.hpp"
#include "schema_check.hpp"
#include "walklab/carpet.hpp"
#include "walklab/error.hpp"
#include "walklab/gh_metric.hpp"
#include "walklab/kernels.hpp"
#include "walklab/lattice.hpp"
#include "walklab/llt.hpp"
#include "walklab/renorm.hpp"
#include "walklab/rng.hpp"
#include "walklab/tree.hpp"

namespace walklab::cli {

namespace {

std::vector<double> t_grid_from(const nlohmann::json& config, double from, double to,
                                std::size_t count) {
  if (!config.contains("t_grid")) return geometric_grid(from, to, count);
  const auto& g = config["t_grid"];
  if (g.is_array()) return g.get<std::vector<double>>();
  return geometric_grid(g.at("from").get<double>(), g.at("to").get<double>(),
                        g.at("count").get<std::size_t>());
}

std::string family_of(const nlohmann::json& config) {
  if (!config.contains("family")) throw SchemaError("/family", "required key is missing");
  return config["family"].get<std::string>();
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

// Spec for ifs_for() from top-level config keys.
nlohmann::json nested_spec(const nlohmann::json& config, const std::string& family) {
  nlohmann::json spec{{"family", family}};
  if (config.contains("ifs_file")) spec["ifs_file"] = config["ifs_file"];
  return spec;
}

nlohmann::ordered_json pairs_json(const ConductanceSet& c) {
  return nlohmann::ordered_json(c.pair_values());
}

}  // namespace

void cmd_renorm(Run& run) {
  const auto& cfg = run.config();
  const IfsSpec ifs = ifs_for(nested_spec(cfg, family_of(cfg)));
  const std::size_t m = ifs.v0.size();
  const FixedPointResult fp = lambda_fixed_point(ifs, ConductanceSet::uniform(m));
  const Exponents ex = exponents(static_cast<double>(ifs.N()), ifs.L, fp.lambda, ifs.L);
  auto& s = run.summary();
  s["ifs"] = ifs.name;
  s["lambda"] = fp.lambda;
  s["iterations"] = fp.iterations;
  s["fixed_point"] = pairs_json(fp.fixed_point);
  s["exponents"] = {{"d_f", ex.d_f}, {"d_w", ex.d_w}, {"kappa", ex.kappa}, {"d_c", ex.d_c}};

  const std::size_t starts = cfg.value("starts", std::size_t{0});
  if (starts > 0) {
    run.record_seeds("renorm starts", run.seed(), starts);
    auto csv = run.open("lambda_starts.csv");
    csv << "start,seed,lambda,iterations\n";
    double lo = fp.lambda, hi = fp.lambda;
    for (std::size_t i = 0; i < starts; ++i) {
      const std::uint64_t seed = run.seed() + i;
      CounterRng rng(seed, 0x2e);
      std::vector<double> values(m * (m - 1) / 2);
      for (double& v : values) v = rng.uniform(0.1, 1.0);
      const FixedPointResult r = lambda_fixed_point(ifs, ConductanceSet::from_pairs(m, values));
      csv << i << ',' << seed << ',' << format_double(r.lambda) << ',' << r.iterations << '\n';
      lo = std::min(lo, r.lambda);
      hi = std::max(hi, r.lambda);
    }
    s["lambda_spread"] = hi - lo;
  }

  if (cfg.contains("homogenize")) {
    const auto& h = cfg["homogenize"];
    const WeightLaw law = h.contains("weights")
                              ? law_from(h["weights"], run.seed())
                              : WeightLaw{WeightLaw::Kind::iid_uniform, 1.0, 2.0, run.seed()};
    const TraceMode mode = h.value("mode", std::string("nested")) == "direct" ? TraceMode::direct
                                                                              : TraceMode::nested;
    const std::size_t count = h.at("seeds").get<std::size_t>();
    std::vector<std::uint64_t> seeds(count);
    for (std::size_t i = 0; i < count; ++i) seeds[i] = law.seed + i;
    run.record_seeds("homogenize", law.seed, count);
    auto csv = run.open("homogenize.csv");
    csv << "level,seed,pair,value\n";
    auto sd_csv = run.open("homogenize_sd.csv");
    sd_csv << "level,sd\n";
    std::vector<double> sds;
    for (std::size_t level : h.at("levels").get<std::vector<std::size_t>>()) {
      const auto samples = homogenize(ifs, law, level, seeds, fp.lambda, mode, run.workers());
      for (const auto& smp : samples) {
        const auto vals = smp.value.pair_values();
        for (std::size_t k = 0; k < vals.size(); ++k) {
          csv << level << ',' << smp.seed << ',' << k << ',' << format_double(vals[k]) << '\n';
        }
      }
      sds.push_back(max_entry_sd(samples));
      sd_csv << level << ',' << format_double(sds.back()) << '\n';
    }
    s["homogenize_sd"] = sds;
    s["homogenize_sd_decreasing"] = strictly_decreasing(sds);
  }
}

namespace {

void llt_lattice(Run& run) {
  const auto& cfg = run.config();
  const std::size_t d = cfg.value("d", std::size_t{1});
  const auto levels = parse_levels(cfg.value("levels", nlohmann::json("8..12")));
  const auto t_grid = t_grid_from(cfg, 0.5, 2.0, 16);
  const double r = cfg.value("x_radius", 1.0);
  const double h = cfg.value("x_spacing", d == 1 ? 1.0 / 256.0 : 1.0 / 8.0);
  const auto points = cube_grid(d, r, h);
  const double t_max = *std::max_element(t_grid.begin(), t_grid.end());
  auto csv = run.open("llt.csv");
  csv << "level,n,points,times,sup_distance\n";
  std::vector<double> sups;
  for (auto k : levels) {
    require(k <= 30, ErrorKind::Capacity, "lattice level exponent must be <= 30");
    const double n = std::ldexp(1.0, static_cast<int>(k));
    const ScalingTriple s = scaling_for(Family::lattice, n, {.d = d});
    // Box radius past the walk's reach, so the box is exact for every step used.
    const auto H = static_cast<std::size_t>(std::max(std::floor(n * t_max) + 2.0, std::ceil(r * s.alpha) + 2.0));
    require(std::pow(2.0 * static_cast<double>(H) + 1.0, static_cast<double>(d)) <= 2e7,
            ErrorKind::Capacity, "lattice box exceeds 2e7 vertices at level " + std::to_string(k));
    const WeightedGraph g = build_lattice_box(d, H);
    const RescaledKernel kern = rescale_kernel(g, s, t_grid, points);
    const double sup = sup_distance(kern, points, d, [&](double t, std::span<const double> x) {
      return gaussian_reference(d, s.c1, t, x);
    });
    sups.push_back(sup);
    csv << k << ',' << format_double(n) << ',' << points.size() / d << ',' << t_grid.size() << ','
        << format_double(sup) << '\n';
  }
  auto& sm = run.summary();
  sm["family"] = "lattice";
  sm["d"] = d;
  sm["levels"] = levels;
  sm["sup_distance"] = sups;
  sm["top_sup_distance"] = sups.back();
  sm["monotone_decreasing"] = strictly_decreasing(sups);
}

void llt_tree(Run& run) {
  const auto& cfg = run.config();
  const auto sizes = cfg.value("sizes", std::vector<std::size_t>{50, 100, 200});
  const std::size_t count = cfg.value("seeds", std::size_t{500});
  const auto t_grid = t_grid_from(cfg, 1.0, 1.0, 1);
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t i = 0; i < count; ++i) seeds[i] = run.seed() + i;
  run.record_seeds("tree samples", run.seed(), count);
  std::vector<std::vector<std::vector<double>>> samples;
  auto raw = run.open("tree_samples.csv");
  raw << "n,seed,t,value\n";
  for (std::size_t n : sizes) {
    samples.push_back(tree_root_kernel_samples(n, seeds, t_grid, run.workers()));
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
      for (std::size_t k = 0; k < count; ++k) {
        raw << n << ',' << seeds[k] << ',' << format_double(t_grid[i]) << ','
            << format_double(samples.back()[i][k]) << '\n';
      }
    }
  }
  auto csv = run.open("ks.csv");
  csv << "n_a,n_b,t,ks\n";
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t j = 0; j + 1 < sizes.size(); ++j) {
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
      const double ks = ks_statistic(samples[j][i], samples[j + 1][i]);
      csv << sizes[j] << ',' << sizes[j + 1] << ',' << format_double(t_grid[i]) << ','
          << format_double(ks) << '\n';
      rows.push_back({{"n_a", sizes[j]}, {"n_b", sizes[j + 1]}, {"t", t_grid[i]}, {"ks", ks}});
    }
  }
  run.summary()["family"] = "tree";
  run.summary()["ks"] = rows;
}

void llt_nested(Run& run, const std::string& family) {
  const auto& cfg = run.config();
  const IfsSpec ifs = ifs_for(nested_spec(cfg, family));
  const double lambda = lambda_fixed_point(ifs, ConductanceSet::uniform(ifs.v0.size())).lambda;
  const ScalingParams params{.N = static_cast<double>(ifs.N()), .L = ifs.L, .alpha = ifs.L,
                             .lambda = lambda};
  const double kappa = std::log(lambda) / std::log(ifs.L);
  const auto levels = parse_levels(cfg.value("levels", nlohmann::json("1..4")));
  const auto t_grid = t_grid_from(cfg, 0.5, 2.0, 8);

  std::vector<ScalingTriple> triples;
  auto ein = run.open("einstein.csv");
  ein << "level,alpha,beta,gamma,ratio\n";
  for (auto k : levels) {
    triples.push_back(scaling_for(Family::nested, static_cast<double>(k), params));
  }
  const EinsteinReport er = einstein_check(triples, kappa);
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const auto& s = triples[i];
    ein << levels[i] << ',' << format_double(s.alpha) << ',' << format_double(s.beta) << ','
        << format_double(s.gamma) << ',' << format_double(er.ratios[i]) << '\n';
  }

  // Kernels compared on the vertices of the lowest level, which every higher
  // level contains.
  const auto lmin = static_cast<std::size_t>(*std::min_element(levels.begin(), levels.end()));
  const WeightedGraph base = build_prefractal(ifs, lmin);
  std::vector<double> points;
  const double base_scale = std::pow(ifs.L, static_cast<double>(lmin));
  for (double x : base.coords()) points.push_back(x / base_scale);
  auto csv = run.open("llt.csv");
  csv << "level,vertices,sup_distance_to_previous\n";
  std::optional<RescaledKernel> prev;
  std::vector<double> sups;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const WeightedGraph g = build_prefractal(ifs, static_cast<std::size_t>(levels[i]));
    const RescaledKernel k = rescale_kernel(g, triples[i], t_grid, points);
    csv << levels[i] << ',' << g.num_vertices() << ',';
    if (prev) {
      sups.push_back(sup_distance(*prev, k));
      csv << format_double(sups.back());
    }
    csv << '\n';
    prev = k;
  }
  auto& sm = run.summary();
  sm["family"] = ifs.name;
  sm["lambda"] = lambda;
  sm["kappa"] = kappa;
  sm["einstein_ratio_min"] = er.ratio_min;
  sm["einstein_ratio_max"] = er.ratio_max;
  sm["sup_distance_to_previous"] = sups;

  if (cfg.contains("exit_radii")) {
    const auto radii = cfg["exit_radii"].get<std::vector<double>>();
    const auto top = static_cast<std::size_t>(*std::max_element(levels.begin(), levels.end()));
    const WeightedGraph g = build_prefractal(ifs, top);
    const SlopeFit f = exit_time_slope(g, g.root(), radii);
    auto ex = run.open("exit_time.csv");
    ex << "radius,exit_time\n";
    for (std::size_t i = 0; i < radii.size(); ++i) {
      ex << format_double(radii[i]) << ',' << format_double(f.exit_times[i]) << '\n';
    }
    sm["exit_level"] = top;
    sm["exit_slope"] = f.slope;
    sm["d_w"] = std::log(static_cast<double>(ifs.N()) * lambda) / std::log(ifs.L);
  }
}

void llt_carpet(Run& run) {
  const auto& cfg = run.config();
  CarpetGenerator gen = standard_carpet();
  if (cfg.contains("carpet_file")) {
    std::ifstream in(cfg["carpet_file"].get<std::string>());
    require(static_cast<bool>(in), ErrorKind::InvalidArgument, "cannot open carpet_file");
    gen = carpet_from_json(nlohmann::json::parse(in));
  }
  const auto levels = parse_levels(cfg.value("levels", nlohmann::json("1..4")));
  const std::vector<double> centers{0.5, 0.5, 1.0 / 6.0, 1.0 / 6.0};
  const std::vector<double> radii{0.25, 0.5};
  std::vector<std::vector<MeasureRow>> per_level;
  auto csv = run.open("measure.csv");
  csv << "level,center,radius,value\n";
  for (auto k : levels) {
    const WeightedGraph g = build_carpet(gen, static_cast<std::size_t>(k));
    // Only space and mass scalings matter here. Mass is normalized by the
    // total, so ball masses are fractions of the whole carpet.
    ScalingTriple s;
    s.family = Family::carpet;
    s.level = static_cast<double>(k);
    s.alpha = s.embed_scale = std::pow(static_cast<double>(gen.L), s.level);
    s.beta = node_measure(g).total();
    per_level.push_back(measure_convergence(g, s, centers, radii));
    for (const auto& r : per_level.back()) {
      csv << k << ',' << r.center << ',' << format_double(r.radius) << ',' << format_double(r.value)
          << '\n';
    }
  }
  run.summary()["family"] = "carpet";
  run.summary()["cauchy_decreasing"] = cauchy_decreasing(per_level);
}

}  // namespace

void cmd_llt(Run& run) {
  const std::string family = family_of(run.config());
  if (family == "lattice") {
    llt_lattice(run);
  } else if (family == "tree") {
    llt_tree(run);
  } else if (family == "gasket" || family == "vicsek" || family == "ifs") {
    llt_nested(run, family);
  } else if (family == "carpet") {
    llt_carpet(run);
  } else {
    throw SchemaError("/family", "llt supports lattice, tree, gasket, vicsek, ifs, carpet");
  }
}

void cmd_delta(Run& run) {
  const auto& cfg = run.config();
  const DeltaMode mode = delta_mode_from_string(cfg.value("mode", std::string("exact")));
  auto& sm = run.summary();
  bool did = false;
  if (cfg.contains("a_file") || cfg.contains("b_file")) {
    if (!cfg.contains("a_file") || !cfg.contains("b_file")) {
      throw SchemaError(cfg.contains("a_file") ? "/b_file" : "/a_file", "a_file and b_file go together");
    }
    auto load = [](const std::string& path) {
      std::ifstream in(path);
      require(static_cast<bool>(in), ErrorKind::InvalidArgument, "cannot open " + path);
      return space_from_json(nlohmann::json::parse(in));
    };
    const auto a = load(cfg["a_file"].get<std::string>());
    const auto b = load(cfg["b_file"].get<std::string>());
    const DeltaResult r = delta_distance(a, b, mode);
    run.write_json("delta.json", {{"mode", cfg.value("mode", std::string("exact"))},
                                  {"value", r.value},
                                  {"witness", r.witness}});
    sm["delta"] = r.value;
    did = true;
  }
  if (cfg.contains("axioms")) {
    const std::size_t samples = cfg["axioms"].at("samples").get<std::size_t>();
    run.record_seed("axiom suite", run.seed());
    const AxiomReport r = metric_axiom_suite(samples, run.seed(), run.workers());
    const nlohmann::json j{{"samples", r.samples},
                           {"max_asymmetry", r.max_asymmetry},
                           {"max_self_distance", r.max_self_distance},
                           {"worst_triangle_excess", r.worst_triangle_excess},
                           {"triangle_violations", r.triangle_violations},
                           {"isometric_copy_failures", r.isometric_copy_failures}};
    run.write_json("axioms.json", j);
    sm["axioms"] = j;
    if (!r.ok()) run.assertion_failed("delta metric axioms failed on random instances");
    did = true;
  }
  if (cfg.contains("heuristic_trials")) {
    const std::size_t trials = cfg["heuristic_trials"].get<std::size_t>();
    run.record_seeds("heuristic trials", run.seed(), trials);
    auto csv = run.open("heuristic.csv");
    csv << "trial,size_a,size_b,exact,heuristic\n";
    std::size_t equal = 0, below = 0;
    for (std::size_t i = 0; i < trials; ++i) {
      const std::uint64_t s = run.seed() + i;
      CounterRng rng(s, 0x4e);
      const auto a = random_space(1 + rng.below(4), 3, mix64(s));
      const auto b = random_space(1 + rng.below(4), 3, mix64(s + 0x9e37));
      const double ex = delta_distance(a, b, DeltaMode::exact).value;
      const double he = delta_distance(a, b, DeltaMode::heuristic).value;
      if (he == ex) ++equal;
      if (he < ex) ++below;
      csv << i << ',' << a.size << ',' << b.size << ',' << format_double(ex) << ','
          << format_double(he) << '\n';
    }
    if (below > 0) run.assertion_failed("delta heuristic fell below the exact value");
    sm["heuristic_trials"] = trials;
    sm["heuristic_equal_fraction"] = trials ? static_cast<double>(equal) / static_cast<double>(trials) : 1.0;
    sm["heuristic_below_exact"] = below;
    did = true;
  }
  if (cfg.contains("tree_sizes")) {
    const auto sizes = cfg["tree_sizes"].get<std::vector<std::size_t>>();
    const std::size_t count = cfg.value("seeds", std::size_t{5});
    const auto t_grid = t_grid_from(cfg, 0.5, 2.0, 4);
    run.record_seeds("delta tree instances", run.seed(), count);
    auto csv = run.open("delta_trend.csv");
    csv << "n_a,n_b,seed,delta\n";
    std::vector<double> means;
    for (std::size_t j = 0; j + 1 < sizes.size(); ++j) {
      double sum = 0.0;
      for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t s = run.seed() + i;
        auto space = [&](std::size_t n) {
          const WeightedGraph g = tree_to_graph(sample_uniform_tree(n, s));
          return kernel_space_from_graph(g, scaling_for(Family::tree, static_cast<double>(n), {}), t_grid);
        };
        const double v = delta_distance(space(sizes[j]), space(sizes[j + 1]), DeltaMode::heuristic).value;
        sum += v;
        csv << sizes[j] << ',' << sizes[j + 1] << ',' << s << ',' << format_double(v) << '\n';
      }
      means.push_back(sum / static_cast<double>(count));
    }
    sm["delta_trend_means"] = means;
    sm["delta_trend_decreasing"] = strictly_decreasing(means);
    did = true;
  }
  if (!did) {
    throw SchemaError("/", "delta needs a_file/b_file, axioms, heuristic_trials or tree_sizes");
  }
}

}  // namespace walklab::cli
