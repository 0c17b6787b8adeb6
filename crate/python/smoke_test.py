"""Quick end-to-end check of the frlp extension module."""

import frlp


def main():
    fig7 = frlp.generate_instance("fig7")
    assert fig7.node_names == ["1", "2", "3", "4"]
    assert fig7.num_demands == 1

    cycles = frlp.enumerate_routes(fig7, 0, "cyclic")
    assert sorted(tuple(r.visits) for r in cycles) == [
        ("1", "2", "1"),
        ("1", "2", "3", "1"),
        ("1", "2", "4", "1"),
        ("1", "3", "2", "3", "1"),
    ]

    # station at node 4 serves the demand only with cyclic routing
    assert not frlp.is_served(fig7, 0, ["4"], "original")
    assert frlp.is_served(fig7, 0, ["4"], "cyclic")
    assert frlp.reevaluate(fig7, ["4"], "cyclic") == 1.0

    per_route, h = frlp.cut_sets(frlp.generate_instance("fig2"), 0)
    assert len(per_route) == 2
    assert sorted(map(sorted, h)) == [["1", "2"], ["2", "3", "4"], ["4", "5"]]

    sol = frlp.solve(fig7, "cyclic", "minstations")
    assert sol.objective == 1.0 and sol.optimal
    assert len(sol.stations) == 1 and frlp.is_served(fig7, 0, sol.stations, "cyclic")

    b = frlp.bounds(frlp.generate_instance("prop5a", n=5))
    assert b.agg <= 1 / 3 + 1e-6 and b.disagg >= 1 - 1e-6

    again = frlp.parse_instance(fig7.to_json())
    assert again.node_names == fig7.node_names

    try:
        frlp.parse_instance('{"range": 1}')
    except ValueError:
        pass
    else:
        raise AssertionError("malformed instance accepted")

    print("smoke test passed:", sol)


if __name__ == "__main__":
    main()
