"""Quick check that the extension module imports and agrees with known values."""

import math

import horograph_py as hg


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol


def main():
    k4 = hg.Graph.complete(4)
    assert close(k4.lambda1(), 4 / 3), k4.lambda1()
    assert close(k4.spectrum()[1], 4 / 3)
    assert close(k4.average_clustering(), 1.0)

    c6 = hg.Graph.cycle(6)
    assert close(c6.lambda1(), 1 - math.cos(2 * math.pi / 6))
    value, subset = c6.conductance()
    assert close(value, 1 / 3) and 0 in subset
    assert c6.cheeger()["lower_ok"] and c6.cheeger()["upper_ok"]

    u = hg.ConnectionFunction.preset("U")
    assert u(0.1) == 1.0 and u(5.0) == 0.01 and u(11.0) == 0.0
    assert hg.presets() == ["U", "S", "C", "I"]
    assert len(hg.ConnectionFunction.uniform_square()) == 5

    pts = hg.PointSet.uniform(300, seed=4)
    lg = hg.generate(pts, hg.ConnectionFunction.preset("S"), seed=9)
    again = hg.generate(pts, hg.ConnectionFunction.preset("S"), seed=9)
    assert lg.edges() == again.edges()
    assert lg.num_layers == 5 and sum(lg.band_counts()) == len(lg.edges())
    g = lg.graph()
    assert g.edge_count() == len(lg.edges())
    assert lg.layer(1).edge_count() <= g.edge_count()

    grid = hg.PointSet.grid(20, 20, 3.0, 3.0)
    gi = hg.Graph.threshold(grid, 0.3)
    assert gi.is_connected()
    summary = gi.summary()
    assert summary["n"] == 400 and 0 < summary["lambda1"] < 1

    walk = gi.simple_walk(0, 50, seed=1)
    assert len(walk) == 51 and all(b in gi.neighbors(a) for a, b in zip(walk, walk[1:]))
    rep = gi.replicating_walk(0, steps=30, delay=5, seed=2)
    assert rep["visited_counts"][-1] == len(rep["visited"])
    stats = gi.walk_stats(grid, num_walks=10, steps=20, seed=3)
    assert stats["mean_of_maxes"] >= stats["mean_of_means"] > 0

    c5 = hg.Graph.cycle(5)
    p = c5.exact_distribution(0, 200)
    assert max(abs(x - 0.2) for x in p) < 1e-9

    try:
        hg.Graph(3, [(0, 0)])
    except ValueError:
        pass
    else:
        raise AssertionError("self-loop accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
