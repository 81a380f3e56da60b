// Python bindings for the main operations: fields as numpy arrays, the
// collision operators, admissibility checks, the refutation pipeline, force
// and evolution entry points.

#include "kinetic/boltzmann.hpp"
#include "kinetic/bounds.hpp"
#include "kinetic/evolve.hpp"
#include "kinetic/grid.hpp"
#include "kinetic/landau.hpp"
#include "kinetic/parallel.hpp"
#include "kinetic/profile.hpp"
#include "kinetic/selfsim.hpp"
#include "kinetic/vpl.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace kinetic;

namespace {

py::array_t<double> field_to_numpy(const ScalarField& f) {
    const int n = f.grid().n;
    py::array_t<double> out({n, n, n});
    auto r = out.mutable_unchecked<3>();
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) r(iz, iy, ix) = f(ix, iy, iz);
    return out;
}

ScalarField field_from_numpy(const GridSpec& g, const py::array_t<double>& arr) {
    auto r = arr.unchecked<3>();
    if (r.shape(0) != g.n || r.shape(1) != g.n || r.shape(2) != g.n)
        throw std::invalid_argument("array shape must be (n, n, n)");
    ScalarField f(g);
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix) f(ix, iy, iz) = r(iz, iy, ix);
    return f;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Landau/Boltzmann collision operators, self-similar rescaling and profile refutation";

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<int, double>(), py::arg("n"), py::arg("extent"))
        .def_readonly("n", &GridSpec::n)
        .def_readonly("extent", &GridSpec::extent)
        .def_property_readonly("spacing", &GridSpec::spacing);

    py::class_<ScalarField>(m, "Field")
        .def(py::init([](const GridSpec& g, const py::array_t<double>& arr) { return field_from_numpy(g, arr); }),
             py::arg("grid"), py::arg("values"))
        .def_property_readonly("grid", &ScalarField::grid)
        .def("to_numpy", &field_to_numpy)
        .def("max_abs", &ScalarField::max_abs)
        .def("min", &ScalarField::min_value);

    py::class_<Vec3>(m, "Vec3")
        .def(py::init<>())
        .def(py::init([](double x, double y, double z) { return Vec3{x, y, z}; }))
        .def_readwrite("x", &Vec3::x)
        .def_readwrite("y", &Vec3::y)
        .def_readwrite("z", &Vec3::z);

    m.def("gaussian_field", &gaussian_field, py::arg("grid"), py::arg("mass"), py::arg("sigma"),
          py::arg("center") = Vec3{});

    m.def("set_thread_count", &set_thread_count);
    m.def("integrate", [](const ScalarField& f) { return integrate(f); });
    m.def("second_moment", [](const ScalarField& f) { return integrate(f, PolyWeight::abs_w_squared()); });
    m.def("lp_norm", &lp_norm, py::arg("field"), py::arg("p"));
    m.def("make_cutoff", &make_cutoff, py::arg("grid"), py::arg("radius"));

    // Landau
    py::class_<LandauParams>(m, "LandauParams")
        .def_static("make", &LandauParams::make, py::arg("gamma"), py::arg("a_const") = 1.0)
        .def_static("with_constants", &LandauParams::with_constants)
        .def_readonly("gamma", &LandauParams::gamma)
        .def_readonly("a_const", &LandauParams::a_const)
        .def_readonly("c_const", &LandauParams::c_const);

    m.def("coeff_a", [](const ScalarField& f, const LandauParams& p) {
        MatrixField a = coeff_a(f, p);
        const int n = f.grid().n;
        py::array_t<double> out({n, n, n, 6});
        auto r = out.mutable_unchecked<4>();
        for (int iz = 0; iz < n; ++iz)
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix)
                    for (int k = 0; k < 6; ++k) r(iz, iy, ix, k) = a.component(k)[f.grid().index(ix, iy, iz)];
        return out;
    }, "abar components (xx, xy, xz, yy, yz, zz) as an (n,n,n,6) array");
    m.def("coeff_a_min_eigenvalue", [](const ScalarField& f, const LandauParams& p) {
        return coeff_a(f, p).min_eigenvalue();
    });
    m.def("coeff_c", &coeff_c);
    m.def("q_landau_trace", &q_landau_trace);
    m.def("q_landau_divergence", &q_landau_divergence);
    m.def("entropy_dissipation", &entropy_dissipation, py::arg("g"), py::arg("params"),
          py::arg("floor_value") = 1e-30);

    // bounds
    m.def("verify_bound_aloinf", [](const ScalarField& h, double q, const LandauParams& p) {
        BoundReport r = verify_bound_aloinf(h, q, p);
        return py::make_tuple(r.pass, r.fitted_constant);
    });

    // selfsim
    py::class_<SelfSimParams>(m, "SelfSimParams")
        .def(py::init([](double gamma, double theta, double s) {
                 SelfSimParams p;
                 p.gamma = gamma;
                 p.theta = theta;
                 p.s_exp = s;
                 return p;
             }),
             py::arg("gamma"), py::arg("theta"), py::arg("s") = 0.4);
    m.def("check_theta_admissible", [](double gamma, double theta, double s, const std::string& mode) {
        SelfSimParams p;
        p.gamma = gamma;
        p.theta = theta;
        p.s_exp = s;
        auto rep = check_theta_admissible(p, selfsim_mode_from_string(mode));
        return py::make_tuple(rep.ok, rep.violations);
    }, py::arg("gamma"), py::arg("theta"), py::arg("s"), py::arg("mode"));
    m.def("to_selfsim", [](const Vec3& x, const Vec3& v, double gamma, double theta, double t) {
        SelfSimParams p;
        p.gamma = gamma;
        p.theta = theta;
        p.t = t;
        auto [y, w] = to_selfsim(x, v, p);
        return py::make_tuple(y, w);
    });

    // profile refutation (homogeneous profiles)
    m.def("refute_homogeneous", [](const ScalarField& q, double gamma, double theta) {
        SelfSimParams p;
        p.gamma = gamma;
        p.theta = theta;
        auto v = refutation_verdict(ProfileDecomposition::homogeneous(q), p);
        py::dict d;
        d["theta"] = v.theta;
        d["gamma"] = v.gamma;
        d["case"] = v.case_name;
        d["predicted"] = v.predicted;
        d["measured"] = v.measured;
        d["verdict"] = v.verdict;
        d["refuted"] = v.refuted;
        return d;
    }, py::arg("q"), py::arg("gamma"), py::arg("theta"));

    // boltzmann
    py::class_<CollisionParams>(m, "CollisionParams")
        .def_static("make", &CollisionParams::make, py::arg("gamma"), py::arg("s"))
        .def_readonly("gamma", &CollisionParams::gamma)
        .def_readonly("s_exp", &CollisionParams::s_exp)
        .def_readonly("q2_const", &CollisionParams::q2_const);
    m.def("collide", [](const Vec3& v, const Vec3& vs, const Vec3& sigma) {
        auto r = collide(v, vs, sigma);
        return py::make_tuple(r.v_prime, r.v_star_prime, r.eta);
    });
    m.def("q2", &q2);
    m.def("weak_form_value", [](const ScalarField& g, const std::string& phi, const CollisionParams& p) {
        std::function<double(const Vec3&)> fn;
        double d2 = 0;
        if (phi == "one") { fn = [](const Vec3&) { return 1.0; }; }
        else if (phi == "wx") { fn = [](const Vec3& w) { return w.x; }; }
        else if (phi == "w2") { fn = [](const Vec3& w) { return w.norm2(); }; d2 = 2.0; }
        else if (phi == "w4") { fn = [](const Vec3& w) { return w.norm2() * w.norm2(); }; d2 = 400.0; }
        else throw std::invalid_argument("phi must be one|wx|w2|w4");
        WeakFormResult r = weak_form(g, fn, d2, p);
        return py::make_tuple(r.value, r.pair_scale, r.angular_converged);
    });

    // vpl
    m.def("compute_force", [](const ScalarField& rho, double coupling) {
        ForceField F = compute_force(rho, coupling);
        return py::make_tuple(field_to_numpy(F.comp[0]), field_to_numpy(F.comp[1]), field_to_numpy(F.comp[2]));
    });

    // evolve
    m.def("landau_stable_dt", &landau_stable_dt, py::arg("f"), py::arg("params"), py::arg("cfl") = 0.15);
    m.def("evolve_monitors", [](const ScalarField& f0, const LandauParams& p, double dt, int steps) {
        EvolutionState s = evolve(f0, p, dt, steps);
        py::list rows;
        for (const auto& mrow : s.history) {
            py::dict d;
            d["t"] = mrow.time;
            d["mass"] = mrow.mass;
            d["energy"] = mrow.energy;
            d["entropy"] = mrow.entropy;
            d["sup"] = mrow.sup_norm;
            rows.append(d);
        }
        return rows;
    });
}
