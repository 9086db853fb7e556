// Python bindings for the main kaclab operations. Exact rationals cross the
// boundary as "p/q" strings so nothing is lost to floating point; callers can
// hand them to fractions.Fraction directly.

#include "kaclab/allocation.hpp"
#include "kaclab/errors.hpp"
#include "kaclab/estimate.hpp"
#include "kaclab/generator.hpp"
#include "kaclab/relation.hpp"
#include "kaclab/system.hpp"
#include "kaclab/voronoi.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace kaclab;

namespace {

std::vector<Rational> rationals_from_strings(const std::vector<std::string>& in) {
    std::vector<Rational> out;
    out.reserve(in.size());
    for (const std::string& s : in) out.push_back(Rational::parse(s));
    return out;
}

Group group_from_spec(const std::string& name, const std::vector<int64_t>& orders) {
    if (!orders.empty()) return Group::product_of_cyclic(orders);
    if (name == "Z") return Group::z(1);
    if (name.rfind("Z^", 0) == 0) return Group::z(std::stoi(name.substr(2)));
    throw std::invalid_argument("group: use \"Z\", \"Z^d\", or pass cyclic orders");
}

FiniteSet set_from_points(const std::vector<size_t>& pts, size_t n) {
    FiniteSet s(n);
    for (size_t p : pts) s.add(p);
    return s;
}

IVec ivec_from(const std::vector<int64_t>& v) {
    if (v.empty() || v.size() > 3) throw std::invalid_argument("lattice vectors have 1..3 coords");
    IVec out;
    for (size_t i = 0; i < v.size(); ++i) out[i] = v[i];
    return out;
}

std::vector<std::vector<int64_t>> ivecs_to_lists(const std::vector<IVec>& vs, int dim) {
    std::vector<std::vector<int64_t>> out;
    for (const IVec& v : vs) {
        std::vector<int64_t> row;
        for (int i = 0; i < dim; ++i) row.push_back(v[size_t(i)]);
        out.push_back(std::move(row));
    }
    return out;
}

py::dict estimate_to_dict(const Estimate& e) {
    py::dict d;
    d["mean"] = e.mean;
    d["stderr"] = e.std_error;
    d["ci95"] = py::make_tuple(e.ci95_low, e.ci95_high);
    d["n_samples"] = e.n_samples;
    d["n_abstained"] = e.n_abstained;
    return d;
}

} // namespace

PYBIND11_MODULE(_kaclab, m) {
    m.doc() = "workbench for return-time identities of measure-preserving group actions";

    py::register_exception<no_return_error>(m, "NoReturnError");
    py::register_exception<abstention_error>(m, "AbstentionError");
    py::register_exception<precondition_error>(m, "PreconditionError");

    py::class_<FiniteSystem>(m, "FiniteSystem")
        .def(py::init([](const std::string& group, const std::vector<int64_t>& cyclic_orders,
                         const std::vector<std::string>& masses,
                         const std::vector<std::vector<uint32_t>>& generators) {
                 return FiniteSystem(group_from_spec(group, cyclic_orders),
                                     rationals_from_strings(masses), generators);
             }),
             py::arg("group"), py::arg("cyclic_orders"), py::arg("masses"), py::arg("generators"))
        .def("__len__", &FiniteSystem::size)
        .def("mass", [](const FiniteSystem& fs, size_t x) { return fs.mass(x).str(); })
        .def("apply",
             [](const FiniteSystem& fs, const std::vector<int64_t>& gamma, size_t x) {
                 return fs.apply(element(fs.group(), gamma), x);
             })
        .def("orbit", &FiniteSystem::orbit)
        .def("is_ergodic", &FiniteSystem::is_ergodic)
        .def("is_sweep_out", [](const FiniteSystem& fs, const std::vector<size_t>& a) {
            return fs.is_sweep_out(set_from_points(a, fs.size()));
        });

    m.def("make_cyclic_system", [](int64_t n) {
        std::vector<uint32_t> perm;
        for (int64_t i = 0; i < n; ++i) perm.push_back(uint32_t((i + 1) % n));
        return FiniteSystem(Group::z(1), std::vector<Rational>(size_t(n), Rational(1, n)), {perm});
    }, py::arg("n"), "uniform n-cycle as a Z-action");

    m.def("return_time", [](const FiniteSystem& fs, const std::vector<size_t>& a, size_t x) {
        return return_time(fs, set_from_points(a, fs.size()), x);
    });
    m.def("induced_map", [](const FiniteSystem& fs, const std::vector<size_t>& a, size_t x) {
        return induced_map(fs, set_from_points(a, fs.size()), x);
    });
    m.def("return_time_integral",
          [](const FiniteSystem& fs, const std::vector<size_t>& a) {
              return return_time_integral(fs, set_from_points(a, fs.size())).str();
          },
          "exact value of the return-time integral over A, as a 'p/q' string");

    py::class_<FiniteAllocation>(m, "FiniteAllocation")
        .def("kappa",
             [](const FiniteAllocation& alloc, size_t x) { return alloc.kappa(x).v; })
        .def("t_kappa", &FiniteAllocation::t_kappa)
        .def("cell", [](const FiniteAllocation& alloc, size_t x) {
            std::vector<std::vector<int64_t>> out;
            for (const GroupElement& g : alloc.cell(x)) out.push_back(g.v);
            return out;
        });

    m.def("greedy_allocation", [](const FiniteSystem& fs, const std::vector<size_t>& a) {
        return FiniteAllocation::greedy(fs, set_from_points(a, fs.size()));
    });
    m.def("forward_hitting_allocation", [](const FiniteSystem& fs, const std::vector<size_t>& a) {
        return FiniteAllocation::forward_hitting(fs, set_from_points(a, fs.size()));
    });

    m.def("verify_allocation_identity",
          [](const FiniteAllocation& alloc, const std::vector<std::string>& f) {
              std::vector<Rational> fr = f.empty()
                  ? std::vector<Rational>(alloc.system().size(), Rational(1))
                  : rationals_from_strings(f);
              AllocationIdentityReport rep = verify_allocation_identity(alloc, fr);
              py::dict d;
              d["f_kappa_integral"] = rep.lhs.str();
              d["f_integral"] = rep.rhs.str();
              d["equal"] = rep.equal;
              return d;
          },
          py::arg("allocation"), py::arg("f") = std::vector<std::string>{});

    m.def("kac_function", [](const FiniteAllocation& alloc) {
        KacFunction kf = kac_function(alloc);
        PartitionCheck pc = verify_translate_partition(alloc, kf);
        py::dict d;
        std::vector<std::vector<std::vector<int64_t>>> shapes;
        for (const auto& s : kf.shapes) {
            std::vector<std::vector<int64_t>> shape;
            for (const GroupElement& g : s) shape.push_back(g.v);
            shapes.push_back(std::move(shape));
        }
        d["shapes"] = shapes;
        py::dict phi;
        for (size_t x = 0; x < kf.phi.size(); ++x)
            if (kf.phi[x]) phi[py::int_(x)] = *kf.phi[x] + 1;
        d["phi"] = phi;
        d["partition_holds"] = pc.holds();
        d["cell_size_integral"] = kac_cell_integral(alloc, kf).str();
        std::vector<py::dict> tails;
        for (const TailBoundRow& row : tail_bound_check(alloc, kf)) {
            py::dict t;
            t["n"] = row.n;
            t["measure"] = row.measure.str();
            t["bound"] = row.bound.str();
            t["ok"] = row.ok;
            tails.push_back(std::move(t));
        }
        d["tail_bounds"] = tails;
        return d;
    });

    m.def("voronoi_cells", [](const std::vector<std::vector<int64_t>>& w_vectors) {
        if (w_vectors.empty()) throw std::invalid_argument("W must be non-empty");
        HittingSet w;
        w.dim = int(w_vectors[0].size());
        for (const auto& v : w_vectors) {
            IVec iv = ivec_from(v);
            w.radius2 = std::max(w.radius2, norm2(iv, w.dim));
            w.vectors.push_back(iv);
        }
        VoronoiCells cells = voronoi_cells(w);
        py::dict d;
        d["bounded"] = cells.bounded;
        if (cells.bounded) {
            d["closed"] = ivecs_to_lists(cells.closed_cell, w.dim);
            d["strict"] = ivecs_to_lists(cells.strict_cell, w.dim);
        } else {
            d["recession"] = ivecs_to_lists(cells.recession, w.dim);
        }
        return d;
    });

    m.def("is_almost_convex", [](const std::vector<std::vector<int64_t>>& cell) {
        if (cell.empty()) throw std::invalid_argument("cell must be non-empty");
        int dim = int(cell[0].size());
        std::vector<IVec> vs;
        for (const auto& v : cell) vs.push_back(ivec_from(v));
        return is_almost_convex(dim, vs);
    });

    m.def("verify_relation_kac",
          [](const std::vector<std::string>& masses, const std::vector<uint32_t>& classes,
             const std::vector<uint32_t>& tau, const std::vector<std::string>& f) {
              EquivRelation rel;
              rel.masses = rationals_from_strings(masses);
              rel.class_of = classes;
              std::vector<Rational> fr = f.empty()
                  ? std::vector<Rational>(rel.size(), Rational(1))
                  : rationals_from_strings(f);
              RelationKacReport rep = verify_relation_kac(rel, TauMap{tau}, fr);
              py::dict d;
              d["f_integral"] = rep.f_integral.str();
              d["f_tau_integral"] = rep.f_tau_integral.str();
              d["preimage_integral"] = rep.preimage_integral.str();
              d["transport_equal"] = rep.transport_equal;
              d["preimage_is_one"] = rep.preimage_is_one;
              return d;
          },
          py::arg("masses"), py::arg("classes"), py::arg("tau"),
          py::arg("f") = std::vector<std::string>{});

    m.def("first_return_tau", [](const FiniteSystem& fs, const std::vector<size_t>& a) {
        return first_return_tau(fs, set_from_points(a, fs.size())).table;
    });

    py::class_<SampledSystem>(m, "SampledSystem")
        .def_static("rotation", &SampledSystem::rotation, py::arg("alpha"), py::arg("seed"))
        .def_static("torus", &SampledSystem::torus, py::arg("alphas"), py::arg("seed"))
        .def_static("odometer", &SampledSystem::odometer, py::arg("depth"), py::arg("seed"))
        .def("describe", &SampledSystem::describe);

    m.def("mc_return_time_integral",
          [](const SampledSystem& ss, const std::string& lo, const std::string& hi,
             uint64_t samples, uint64_t budget, int threads) {
              IntervalSet iv;
              iv.parts.push_back({Rational::parse(lo), Rational::parse(hi)});
              SampledSet A(iv);
              Integrand f = [&](const SamplePoint& x) -> std::optional<double> {
                  if (!ss.member(A, x)) return 0.0;
                  auto r = return_time(ss, A, x, budget);
                  if (!r) return std::nullopt;
                  return double(*r);
              };
              McOptions opt;
              opt.threads = threads;
              return estimate_to_dict(mc_estimate(ss, f, samples, opt));
          },
          py::arg("system"), py::arg("lo"), py::arg("hi"), py::arg("samples") = 100000,
          py::arg("budget") = 100000, py::arg("threads") = 1,
          "Monte Carlo estimate of the return-time integral over [lo, hi) on a rotation");

    m.def("sweep_out_partition_rotation",
          [](const SampledSystem& ss, const std::string& eps, int n_max) {
              SampledSweepOutPartition part = sweep_out_partition(ss, Rational::parse(eps), n_max);
              py::dict d;
              std::vector<std::string> measures;
              for (const Rational& r : part.piece_measures) measures.push_back(r.str());
              d["piece_measures"] = measures;
              d["residual"] = part.residual.str();
              return d;
          });

    m.attr("__version__") = "0.1.0";
}
