"""Quick end-to-end check of the siov extension module.

Build and install first, e.g. `maturin develop -m crates/py/Cargo.toml`.
"""

import math
import tempfile
from pathlib import Path

import siov


def main():
    assert siov.strategies() == ["as_planned", "blacklist", "replace", "replace_with_closure"]
    assert siov.run_seed(0, 0) == 0xE220A8397B1DCDAF

    cfg = siov.SimConfig(
        strategy="replace_with_closure", threshold=2, weeks=2, runs=3,
        grid_size=12, poi_count=3, home_count=20,
    )
    assert cfg.vehicle_count == 22
    assert cfg.alternative_scan == "on_suspension"

    world = siov.World(cfg, seed=5)
    assert (world.clock, world.vehicle_count, world.poi_count) == (0, 22, 3)
    assert world.sample()["quality_index"] == 1.0
    first = world.tick()
    assert first["clock"] == 0 and world.clock == 1
    world.run_weeks(2)
    series = world.series()
    assert len(series["quality_index"]) == 1 + 336
    assert len(series["weekly_no_visit"]) == 2
    assert world.ties_symmetric()

    v = world.vehicle(0)
    assert len(v["plan"]) == 3 and 0.0 <= v["expectation"] <= 1.0
    for peer, _, encounters, strong in v["ties"]:
        assert peer != 0 and encounters >= 1
    assert all(0.0 <= q <= 1.0 for _, q, _ in world.pois())

    a = siov.run(cfg, 11)
    assert a == siov.run(cfg, 11)
    assert all(math.isfinite(x) for x in a["connectivity_index"])

    cell = siov.run_cell(cfg, master_seed=1)
    assert cell["runs"] == 3 and len(cell["sdu"]) == 336

    with tempfile.TemporaryDirectory() as tmp:
        conf = Path(tmp) / "exp.toml"
        conf.write_text(
            'grid_size = 8\npoi_count = 2\nhome_count = 6\nweeks = 1\nruns = 2\n'
            'strategy = ["blacklist", "replace"]\nthreshold = [2, 5]\n'
        )
        names = siov.run_experiment(str(conf), out=str(Path(tmp) / "out"))
        assert names == ["blacklist_th2", "blacklist_th5", "replace_th2", "replace_th5"]
        header = (Path(tmp) / "out" / "replace_th5.csv").read_text().splitlines()[0]
        assert header == "tick,quality_index,connectivity_index,sdu"

    for bad in (dict(strategy="sometimes"), dict(threshold=0), dict(grid_size=2)):
        try:
            siov.SimConfig(**bad)
        except ValueError:
            pass
        else:
            raise AssertionError(f"accepted {bad}")

    print("smoke test ok")


if __name__ == "__main__":
    main()
