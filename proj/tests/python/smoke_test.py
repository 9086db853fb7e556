"""Smoke tests for the _kaclab extension module (run by ctest)."""

import sys
from fractions import Fraction

import kaclab as k


def check(cond, msg):
    if not cond:
        print(f"FAIL: {msg}")
        sys.exit(1)
    print(f"ok: {msg}")


def main():
    fs = k.make_cyclic_system(5)
    check(len(fs) == 5, "cyclic(5) has 5 points")
    check(fs.is_ergodic(), "cyclic(5) is ergodic")
    check(fs.is_sweep_out([0, 1]), "A = {0,1} is sweep-out")
    check(fs.apply([1], 4) == 0, "T_1(4) = 0")

    check(k.return_time(fs, [0, 1], 1) == 4, "r_A(1) = 4")
    check(Fraction(k.return_time_integral(fs, [0, 1])) == 1, "Kac integral is exactly 1")

    alloc = k.greedy_allocation(fs, [0, 1])
    check(alloc.kappa(3) == [-2], "greedy kappa(3) = -2 under norm-lex order")
    rep = k.verify_allocation_identity(alloc)
    check(rep["equal"] and Fraction(rep["f_integral"]) == 1, "allocation identity exact")

    kf = k.kac_function(alloc)
    check(kf["partition_holds"], "translate family tiles the space")
    check(Fraction(kf["cell_size_integral"]) == 1, "cell-size integral is 1")
    check(all(row["ok"] for row in kf["tail_bounds"]), "Markov tail bounds hold")

    cells = k.voronoi_cells([[0], [3], [-2]])
    check(cells["bounded"], "d=1 hitting set gives a bounded cell")
    check(cells["closed"] == [[0], [-1], [1]], "closed cell matches")
    check(cells["strict"] == [[0], [-1]], "strict cell matches")
    check(k.is_almost_convex([[0, 0], [1, 0], [0, 1], [1, 1]]), "unit square almost convex")
    check(not k.is_almost_convex([[0, 0], [2, 0], [0, 2], [2, 2]]), "2x2 square is not")

    rel = k.verify_relation_kac(
        masses=["1/6", "1/6", "1/6", "1/2"], classes=[0, 0, 0, 1], tau=[1, 1, 1, 3]
    )
    check(Fraction(rel["preimage_integral"]) == 1, "preimage expectation is 1")
    check(rel["transport_equal"], "relation transport identity holds")

    tau = k.first_return_tau(fs, [0, 1])
    check(tau[0] == 1, "first-return tau(0) = 1")

    rot = k.SampledSystem.rotation("0.6180339887498949", 7)
    est = k.mc_return_time_integral(rot, "0", "1/3", samples=200000, budget=1000)
    check(abs(est["mean"] - 1.0) <= 3 * est["stderr"], "MC Kac estimate within 3 sigma")
    est2 = k.mc_return_time_integral(rot, "0", "1/3", samples=200000, budget=1000)
    check(est["mean"] == est2["mean"], "MC estimates replay bit-identically")

    part = k.sweep_out_partition_rotation(rot, "1/2", 4)
    check(part["piece_measures"] == ["1/4", "1/8", "1/16", "1/32"], "quantile piece measures")
    check(Fraction(part["residual"]) == Fraction(1, 32), "residual is the eps tail")

    try:
        k.return_time(fs, [], 0)
        check(False, "empty target must raise")
    except Exception:
        check(True, "empty target raises")

    print("python smoke tests passed")


if __name__ == "__main__":
    main()
