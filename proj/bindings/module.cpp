#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "bisp/analysis.hpp"
#include "bisp/graphs.hpp"
#include "bisp/json_io.hpp"
#include "bisp/layered_sampler.hpp"
#include "bisp/partitioner.hpp"

namespace py = pybind11;

namespace {

using EdgePair = std::pair<std::uint64_t, std::uint64_t>;

// JSON crosses the boundary as text; both sides already have exact
// serializers, so a string round trip avoids a second conversion layer.
py::object json_to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

nlohmann::json py_to_json(const py::object& obj) {
  const std::string text =
      py::cast<std::string>(py::module_::import("json").attr("dumps")(obj));
  return nlohmann::json::parse(text);
}

std::vector<bisp::Edge> to_edges(const std::vector<EdgePair>& pairs) {
  std::vector<bisp::Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [src, dst] : pairs) edges.push_back({src, dst});
  return edges;
}

std::vector<bisp::Assignment> to_assignments(
    const std::vector<EdgePair>& pairs,
    const std::vector<std::uint32_t>& parts) {
  if (pairs.size() != parts.size()) {
    throw py::value_error("edges and partitions differ in length");
  }
  std::vector<bisp::Assignment> out;
  out.reserve(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    out.push_back({pairs[k].first, pairs[k].second, parts[k]});
  }
  return out;
}

std::vector<EdgePair> drain(bisp::EdgeSource& source) {
  std::vector<EdgePair> out;
  while (auto e = source.next()) out.emplace_back(e->src, e->dst);
  return out;
}

std::vector<std::uint32_t> partition_edges(const std::vector<EdgePair>& pairs,
                                           std::uint32_t n, std::uint64_t seed,
                                           const std::string& mode,
                                           const std::string& algo,
                                           unsigned threads) {
  const std::vector<bisp::Edge> edges = to_edges(pairs);
  py::gil_scoped_release release;
  if (algo == "random") {
    return bisp::assign_parallel(edges, bisp::RandomAssigner(n, seed),
                                 threads);
  }
  if (algo == "grid") {
    return bisp::assign_parallel(edges, bisp::GridAssigner(n, seed), threads);
  }
  if (algo != "bisp") throw bisp::Error("unknown algo " + algo);
  if (mode != "hash" && mode != "rng") {
    throw bisp::Error("unknown mode " + mode);
  }
  const bisp::Layout layout = bisp::plan_layout(n);
  const bisp::BispAssigner assigner(
      layout, seed, mode == "hash" ? bisp::Mode::hash : bisp::Mode::rng);
  return bisp::assign_parallel(edges, assigner, threads);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "edge partitioning with bounded per-vertex replication";

  py::register_exception<bisp::Error>(m, "BispError", PyExc_RuntimeError);

  m.def(
      "plan",
      [](std::uint32_t n) { return json_to_py(layout_to_json(bisp::plan_schedule(n))); },
      py::arg("n"),
      "Block schedule and cardinality for n partitions, as a dict.");

  m.def(
      "materialize",
      [](std::uint32_t n) {
        return json_to_py(bisp::system_to_json(
            bisp::materialize(bisp::plan_layout(n))));
      },
      py::arg("n"),
      "Explicit system matching the sampler for n partitions, as a dict.");

  m.def(
      "verify",
      [](const py::object& system, double tol) {
        const bisp::ExplicitSystem sys =
            bisp::system_from_json(py_to_json(system));
        return json_to_py(bisp::report_to_json(bisp::verify_system(sys, tol)));
      },
      py::arg("system"), py::arg("tol") = 1e-9,
      "Balance and intersection report for a system dict.");

  m.def(
      "extend",
      [](const py::object& system, std::uint32_t r) {
        const bisp::ExplicitSystem sys =
            bisp::system_from_json(py_to_json(system));
        return json_to_py(bisp::system_to_json(bisp::extend_system(sys, r)));
      },
      py::arg("system"), py::arg("block"),
      "System after one extension block of size r.");

  m.def("partition", &partition_edges, py::arg("edges"), py::arg("n"),
        py::arg("seed"), py::arg("mode") = "hash", py::arg("algo") = "bisp",
        py::arg("threads") = 1,
        "Partition ids for each (src, dst) edge, in input order.");

  m.def(
      "metrics",
      [](const std::vector<EdgePair>& edges,
         const std::vector<std::uint32_t>& parts, std::uint32_t n) {
        const auto assignments = to_assignments(edges, parts);
        py::gil_scoped_release release;
        const bisp::Metrics m2 = bisp::compute_metrics(assignments, n);
        py::gil_scoped_acquire acquire;
        return json_to_py(bisp::metrics_to_json(m2));
      },
      py::arg("edges"), py::arg("partitions"), py::arg("n"),
      "Balance and replication metrics for an assignment.");

  m.def(
      "extract",
      [](const std::vector<EdgePair>& edges,
         const std::vector<std::uint32_t>& parts, std::uint32_t nodes,
         std::uint32_t n) {
        const auto assignments = to_assignments(edges, parts);
        const auto [sys, report] = bisp::extract_system(assignments, nodes, n);
        return py::make_tuple(json_to_py(bisp::system_to_json(sys)),
                              json_to_py(bisp::report_to_json(report)));
      },
      py::arg("edges"), py::arg("partitions"), py::arg("nodes"), py::arg("n"),
      "Realized system and its report from a complete-graph assignment.");

  m.def(
      "complete_graph",
      [](std::uint64_t nodes) {
        bisp::CompleteSource source(nodes);
        return drain(source);
      },
      py::arg("nodes"), "All ordered pairs on nodes vertices, loops included.");

  m.def(
      "erdos_renyi",
      [](std::uint64_t nodes, std::uint64_t edges, std::uint64_t seed) {
        bisp::ErdosRenyiSource source(nodes, edges, seed);
        return drain(source);
      },
      py::arg("nodes"), py::arg("edges"), py::arg("seed"),
      "Independent uniform ordered pairs.");

  m.def(
      "power_law",
      [](std::uint64_t nodes, std::uint64_t edges, double alpha,
         std::uint64_t seed) {
        bisp::PowerLawSource source(nodes, edges, alpha, seed);
        return drain(source);
      },
      py::arg("nodes"), py::arg("edges"), py::arg("alpha"), py::arg("seed"),
      "Power-law endpoint sampling with exponent alpha.");

  m.def(
      "star",
      [](std::uint64_t leaves) {
        auto edges = bisp::star_edges(leaves);
        std::vector<EdgePair> out;
        out.reserve(edges.size());
        for (const auto& e : edges) out.emplace_back(e.src, e.dst);
        return out;
      },
      py::arg("leaves"), "Hub vertex 0 with one edge to each leaf.");
}
