#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "run.hpp"
#include "schema_check.hpp"
#include "walklab/error.hpp"
#include "walklab/graph_io.hpp"
#include "walklab/harnack.hpp"
#include "walklab/kernels.hpp"
#include "walklab/resistance.hpp"
#include "walklab/tree.hpp"

namespace walklab::cli {

namespace {

std::string readable(const std::string& inequality) {
  if (inequality == "oscillation_bound") return "oscillation bound (constant 12)";
  if (inequality == "energy_decay_bound") return "energy decay bound (constant 2)";
  if (inequality == "on_diagonal_bound") return "on-diagonal bound (constant 3)";
  if (inequality == "energy_identity") return "energy identity";
  if (inequality == "energy_monotone") return "energy monotonicity";
  return inequality;
}

void write_rows(std::ostream& out, const std::string& graph, const std::vector<InequalityRow>& rows) {
  for (const auto& r : rows) {
    out << graph << ',' << r.inequality << ',' << r.m << ',' << r.x << ',' << r.y << ','
        << format_double(r.lhs) << ',' << format_double(r.rhs) << ',' << format_double(r.slack)
        << '\n';
  }
}

// Round trip and metric recovery for one tree; returns a failure text or "".
std::string check_tree_codec(const OrderedTree& t, const WeightedGraph& g) {
  const Excursion e = excursion_from_tree(t);
  const OrderedTree back = tree_from_excursion(e);
  if (!(back == t)) return "excursion round trip changed the tree";
  if (excursion_from_tree(back).samples != e.samples) return "tree round trip changed the excursion";
  const auto contour = contour_vertices(t);
  for (std::size_t s = 0; s < contour.size(); ++s) {
    const auto hops = hop_distances(g, contour[s]);
    for (std::size_t u = 0; u < contour.size(); ++u) {
      const double dw = excursion_distance(e, s, u);
      const auto dt = tree_distance(t, contour[s], contour[u]);
      if (dw != static_cast<double>(dt) || hops[contour[u]] != dt) {
        return "excursion metric differs from the tree metric at contour times " +
               std::to_string(s) + ", " + std::to_string(u);
      }
    }
  }
  return "";
}

}  // namespace

void cmd_build(Run& run) {
  const auto graphs = resolve_graphs(run);
  auto table = run.open("graphs.csv");
  table << "graph,vertices,edges,total_mass,root\n";
  std::size_t codec_checked = 0;
  std::vector<std::size_t> per_spec(graph_specs(run.config()).size(), 0);
  for (const auto& ng : graphs) ++per_spec[ng.spec_index];
  for (const auto& ng : graphs) {
    const auto& g = ng.graph;
    table << ng.name << ',' << g.num_vertices() << ',' << g.num_edges() << ','
          << format_double(node_measure(g).total()) << ',' << g.root() << '\n';
    if (per_spec[ng.spec_index] == 1) {
      run.open("graphs/" + ng.name + ".json") << graph_to_json(g).dump(1) << '\n';
    }
    if (ng.tree) {
      const auto problem = check_tree_codec(*ng.tree, g);
      if (!problem.empty()) run.assertion_failed(ng.name + ": " + problem);
      ++codec_checked;
    }
  }
  run.summary()["graphs"] = graphs.size();
  run.summary()["trees_codec_checked"] = codec_checked;
}

void cmd_kernel(Run& run) {
  const auto graphs = resolve_graphs(run);
  require(graphs.size() == 1, ErrorKind::InvalidArgument, "kernel expects exactly one graph");
  const auto& g = graphs.front().graph;
  const VertexId source = run.config().value("source", g.root());
  require(source < g.num_vertices(), ErrorKind::InvalidArgument, "source is not a vertex");
  const std::size_t M = run.config().value("steps", std::size_t{100});
  const bool smoothed = run.config().value("flavor", std::string("smoothed")) == "smoothed";
  require(M <= 100000 && g.num_vertices() * (M + 2) <= 50000000, ErrorKind::Capacity,
          "kernel table exceeds 5e7 entries");
  const KernelTable table = smoothed ? smoothed_table(g, source, M)
                                     : evolve_distribution(g, source, static_cast<long long>(M));
  run.open("kernel.csv").close();
  write_kernel_csv(table, (run.out() / "kernel.csv").string());
  double worst_mass = 0.0;
  for (const auto& row : table.rows) worst_mass = std::max(worst_mass, std::abs(total_mass(g, row) - 1.0));
  run.summary()["graph"] = graphs.front().name;
  run.summary()["source"] = source;
  run.summary()["steps"] = M;
  run.summary()["max_mass_error"] = worst_mass;
  if (run.config().contains("times")) {
    const auto times = run.config()["times"].get<std::vector<double>>();
    const double tol = run.config().value("tolerance", 1e-12);
    const auto rows = continuous_kernel(g, source, times, tol);
    auto out = run.open("continuous.csv");
    out << "t,vertex,p\n";
    for (std::size_t i = 0; i < times.size(); ++i) {
      for (VertexId v = 0; v < g.num_vertices(); ++v) {
        out << format_double(times[i]) << ',' << v << ',' << format_double(rows[i][v]) << '\n';
      }
    }
  }
}

void cmd_resistance(Run& run) {
  const auto graphs = resolve_graphs(run);
  const std::size_t M = run.config().value("steps", std::size_t{200});
  std::optional<KernelTable> injected;
  if (run.config().contains("kernel_file")) {
    require(graphs.size() == 1, ErrorKind::InvalidArgument, "kernel_file needs exactly one graph");
    injected = read_kernel_csv(run.config()["kernel_file"].get<std::string>(), graphs.front().graph.root());
    require(injected->flavor == KernelFlavor::smoothed, ErrorKind::InvalidArgument,
            "kernel_file must hold the smoothed kernel q");
  }
  auto csv = run.open("inequalities.csv");
  csv << "graph,inequality,m,x,y,lhs,rhs,slack\n";
  auto prof = run.open("profiles.csv");
  prof << "graph,vertex,resistance\n";
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::size_t total_violations = 0, total_checks = 0;
  double identity_err = 0.0, ratio_min = std::numeric_limits<double>::infinity(), ratio_max = 0.0;
  for (const auto& ng : graphs) {
    const auto& g = ng.graph;
    const ResistanceProfile profile = resistance_profile(g, g.root());
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
      prof << ng.name << ',' << v << ',' << format_double(profile.resistance[v]) << '\n';
    }
    const InequalityReport chain = verify_energy_chain(g, g.root(), M, profile);
    const InequalityReport osc =
        verify_oscillation_bound(g, g.root(), M, {}, injected ? &*injected : nullptr);
    write_rows(csv, ng.name, chain.rows);
    write_rows(csv, ng.name, osc.rows);
    write_rows(csv, ng.name, chain.violations);
    write_rows(csv, ng.name, osc.violations);
    for (const auto* r : {&chain, &osc}) {
      if (!r->ok()) {
        const auto& v = r->violations.front();
        run.assertion_failed(ng.name + ": " + readable(v.inequality) + " violated at m=" +
                             std::to_string(v.m) + " x=" + std::to_string(v.x) + " y=" +
                             std::to_string(v.y) + " (lhs " + format_double(v.lhs) + " > rhs " +
                             format_double(v.rhs) + ")");
      }
    }
    const std::size_t violations = chain.violations.size() + osc.violations.size();
    total_violations += violations;
    total_checks += chain.checks + osc.checks;
    identity_err = std::max(identity_err, chain.identity_max_rel_error);
    if (chain.identity_ratio_max > 0.0) {  // 0 when the kernel is flat from the start
      ratio_min = std::min(ratio_min, chain.identity_ratio_min);
      ratio_max = std::max(ratio_max, chain.identity_ratio_max);
    }
    rows.push_back({{"graph", ng.name},
                    {"vertices", g.num_vertices()},
                    {"checks", chain.checks + osc.checks},
                    {"violations", violations},
                    {"identity_max_rel_error", chain.identity_max_rel_error},
                    {"oscillation_worst_ratio", osc.worst_ratio}});
  }
  run.summary()["steps"] = M;
  run.summary()["graphs"] = rows;
  run.summary()["total_checks"] = total_checks;
  run.summary()["total_violations"] = total_violations;
  run.summary()["identity_max_rel_error"] = identity_err;
  run.summary()["identity_ratio_min"] = ratio_min;
  run.summary()["identity_ratio_max"] = ratio_max;
}

void cmd_harnack(Run& run) {
  const auto graphs = resolve_graphs(run);
  const std::size_t trials = run.config().value("trials", std::size_t{0});
  const std::uint64_t seed = run.seed();
  auto phi = run.open("phi.csv");
  phi << "graph,center,R,T,generators,phi,random_trials,random_max\n";
  auto decay = run.open("decay.csv");
  decay << "graph,center,k,R_k,osc_q,osc_q_plus,c_h,rhs,ok\n";
  nlohmann::ordered_json cyl_rows = nlohmann::ordered_json::array();
  nlohmann::ordered_json decay_rows = nlohmann::ordered_json::array();
  if (trials > 0) run.record_seed("harnack random data", seed);
  for (const auto& ng : graphs) {
    const auto& g = ng.graph;
    for (const auto& c : ng.spec.value("cylinders", nlohmann::json::array())) {
      const VertexId center = c.value("center", g.root());
      require(center < g.num_vertices(), ErrorKind::InvalidArgument, "cylinder center is not a vertex");
      const Cylinder cyl(g, center, c.at("R").get<double>(), c.at("T").get<std::size_t>());
      const PhiResult r = phi_constant(g, cyl, run.workers());
      double random_max = 0.0;
      for (std::size_t t = 0; t < trials; ++t) {
        const double v = random_data_ratio(g, cyl, seed, t);
        if (std::isfinite(v)) random_max = std::max(random_max, v);
      }
      if (random_max > r.value * (1.0 + 1e-9)) {
        run.assertion_failed(ng.name + ": random boundary data beat the Harnack constant (" +
                             format_double(random_max) + " > " + format_double(r.value) + ")");
      }
      phi << ng.name << ',' << center << ',' << format_double(cyl.R()) << ',' << cyl.T() << ','
          << r.generators << ',' << format_double(r.value) << ',' << trials << ','
          << format_double(random_max) << '\n';
      cyl_rows.push_back({{"graph", ng.name}, {"center", center}, {"R", cyl.R()}, {"T", cyl.T()},
                          {"phi", r.infinite ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(r.value)},
                          {"random_max", random_max}});
    }
    if (ng.spec.contains("decay")) {
      const auto& d = ng.spec["decay"];
      const VertexId center = d.value("center", g.root());
      require(center < g.num_vertices(), ErrorKind::InvalidArgument, "decay center is not a vertex");
      const DecayReport rep = oscillation_decay_check(g, center, d.at("R0").get<double>(),
                                                      d.at("kappa").get<double>(), d.value("s", 2.0),
                                                      0.0, run.workers());
      for (const auto& s : rep.steps) {
        decay << ng.name << ',' << center << ',' << s.k << ',' << format_double(s.R_k) << ','
              << format_double(s.osc_q) << ',' << format_double(s.osc_q_plus) << ','
              << format_double(s.c_h) << ',' << format_double(s.rhs) << ',' << (s.ok ? 1 : 0) << '\n';
        if (!s.ok) {
          run.assertion_failed(ng.name + ": oscillation decay step k=" + std::to_string(s.k) +
                               " failed (" + format_double(s.osc_q_plus) + " > " +
                               format_double(s.rhs) + ")");
        }
      }
      decay_rows.push_back({{"graph", ng.name}, {"c_h", rep.c_h}, {"steps", rep.steps.size()},
                            {"ok", rep.ok()}});
    }
  }
  run.summary()["cylinders"] = cyl_rows;
  run.summary()["decay"] = decay_rows;
}

}  // namespace walklab::cli
