use pyo3::prelude::*;
use pyo3::types::PyModule;

fn with_module(code: &std::ffi::CStr) {
    Python::attach(|py| {
        let m = PyModule::new(py, "padic_potts").unwrap();
        padic_potts_py::register(&m).unwrap();
        py.import("sys").unwrap().getattr("modules").unwrap().set_item("padic_potts", m).unwrap();
        if let Err(e) = py.run(code, None, None) {
            e.print(py);
            panic!("python snippet failed");
        }
    });
}

#[test]
fn arithmetic() {
    with_module(
        cr#"
import padic_potts as pp
x = pp.Padic("1/3", 5)
assert x.is_exact and x.valuation == 0
assert (x * 3) == 1
y = pp.Padic("1+5^3", 5)
assert (y - 1).norm_exp == 3
assert (1 - y).norm_exp == 3
assert pp.Padic.parse(y.compact(), 5) == y
assert x.to_rational() == (1, 3)
assert (y ** 2 - 1).valuation == 3
try:
    pp.Padic("0", 5).__truediv__(pp.Padic("0", 5))
    raise AssertionError
except ZeroDivisionError:
    pass
"#,
    );
}

#[test]
fn params_and_regimes() {
    with_module(
        cr#"
import padic_potts as pp
m = pp.MapParams(5, 2, 5, "1+5^3")
assert m.regime() == ("B2", 2)
assert pp.MapParams(3, 3, "3", "1+9").regime()[0] == "A"
assert m.describe()["p"] == 5
try:
    pp.MapParams(2, 2, 2, "1")
    raise AssertionError
except ValueError as e:
    assert "p≥3 required" in str(e)
try:
    m.eval_f(m.pole)
    raise AssertionError
except pp.PoleHitError:
    pass
"#,
    );
}

#[test]
fn dynamics() {
    with_module(
        cr#"
import padic_potts as pp
s = pp.PottsSystem(pp.MapParams(5, 2, 5, "1+5^3"))
assert len(s.partition()["balls"]) == 2
traj, status = s.orbit(pp.Padic("7", 5))
assert "ConvergedTo1" in status
x, r = s.cylinder_point([1, 2, 2])
assert s.itinerary_of(x, 3) == [1, 2, 2]
assert s.basin_classify(x, 3) == {"JuliaCandidate": {"itinerary": "122", "depth": 3}}
assert s.incidence_matrix() == [[1, 1], [1, 1]]
per = s.periodic_point([1, 2])
assert s.params.eval_f(s.params.eval_f(per)).agrees_with(per, 30)
assert [len(l) for l in s.pole_preimage_tree(3)] == [2, 4, 8]
assert s.df_exponent([1, 2], [1, 1]) > 0
"#,
    );
}

#[test]
fn roots() {
    with_module(
        cr#"
import padic_potts as pp
a = pp.Padic("1+5", 5)
r = pp.principal_kth_root(a, 2)
assert (r * r).agrees_with(a, 30)
assert len(pp.roots_of_unity(4, 5)) == 4
b1 = pp.MapParams(5, 3, 5, "1+5^3")
assert b1.regime() == ("B1", 1)
xs = pp.fixed_point_b1(b1)
assert b1.eval_f(xs).agrees_with(xs, 30)
"#,
    );
}
