"""Smoke test for the pyqcool extension.

    pip install -e . --no-build-isolation
    python python/smoke_test.py
"""

import json
import math
import pathlib
import subprocess
import sys

import pyqcool

ROOT = pathlib.Path(__file__).resolve().parents[1]


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a!r} != {b!r}"


def check_values():
    close(pyqcool.dynamic_final_p(0.1, 3), 0.028, 1e-15)
    close(pyqcool.sub_optimal_final_p(0.1, 3, 2), 0.002308096, 1e-15)
    close(pyqcool.semi_open_final_p(0.1, [3, 3]), 0.01504, 1e-15)
    close(pyqcool.hbac_final_p(0.1, 3, 200, [1, 2]), 0.01 / 0.82, 1e-12)

    p = pyqcool.probability_from_temperature(50.0, 5.0)
    close(p, 0.008168701470416747, 1e-15)
    close(pyqcool.temperature_from_probability(p, 5.0), 50.0, 1e-9)
    assert math.isinf(pyqcool.temperature_from_probability(0.5, 5.0))


def check_unitaries():
    swap = pyqcool.CoolingUnitary([["011", "100"]], 3)
    thermal = pyqcool.thermal_vector([0.1, 0.1, 0.1])
    close(swap.work_cost(thermal), 0.072, 1e-15)
    after = swap.apply(thermal)
    close(sum(after[4:]), 0.028, 1e-15)

    for name in ("ppa", "mirror", "minimal_work"):
        u = pyqcool.CoolingUnitary.protocol(name, 4)
        close(sum(u.apply(pyqcool.thermal_vector([0.2] * 4))[8:]), pyqcool.dynamic_final_p(0.2, 4), 1e-12)

    assert (swap @ swap.inverse()).mapping() == list(range(8))
    assert swap.circuit().simulate(thermal) == after
    assert len(swap.circuit()) == 5
    assert pyqcool.CoolingUnitary.from_mapping(list(range(256)), 8).memory_footprint() == 4100

    try:
        pyqcool.CoolingUnitary([["011", "011"]], 3)
    except ValueError:
        pass
    else:
        raise AssertionError("degenerate cycle accepted")


def check_reports():
    from jsonschema import Draft202012Validator
    from referencing import Registry, Resource

    schemas = {p.name: json.loads(p.read_text()) for p in (ROOT / "schemas").glob("*.json")}
    registry = Registry().with_resources(
        (name, Resource.from_contents(s)) for name, s in schemas.items()
    )
    config_schema = Draft202012Validator(schemas["method_config.schema.json"], registry=registry)
    row_schema = Draft202012Validator(schemas["result_row.schema.json"], registry=registry)

    configs = [
        {"method": "dynamic", "n": 9},
        {"method": "sub_optimal", "cluster_size": 3, "rounds": 2, "protocol": "mirror"},
        {"method": "hbac", "cluster_size": 3, "rounds": 2, "reset_qubits": [1, 2]},
        {"method": "semi_open", "cluster_sizes": [3, 3, 3, 3]},
        {"method": "dynamic", "n": 3, "protocol": {"custom": {"n": 3, "cycles": [["011", "100"]]}}},
    ]
    for cfg in configs:
        config_schema.validate(cfg)
        report = pyqcool.analyze(json.dumps(cfg), 50.0, 5.0)
        assert report["qasm"].startswith("OPENQASM 3.0;")
        assert report["final_p1"] < report["initial_p1"]
    assert not config_schema.is_valid({"method": "hbac", "cluster_size": 3, "rounds": 2, "reset_qubits": [0]})

    dyn9 = pyqcool.analyze(json.dumps(configs[0]), 50.0, 5.0)
    close(dyn9["final_temperature"] * 1e3, 12.47966115417788, 1e-9)
    close(dyn9["final_p1"], 4.459368177798130e-9, 1e-21)

    hbac = pyqcool.build_circuit(json.dumps(configs[2]))
    assert hbac.gate_count() == {"by_controls": {"2": 10}, "total": 10, "resets": 1}
    qasm = hbac.to_qasm()
    lines = qasm.splitlines()
    assert sum(l.startswith("reset ") for l in lines) == 2
    assert sum(l.startswith("ccx ") for l in lines) == 10

    noisy = pyqcool.simulate_method(json.dumps(configs[1]), 0.1, 0.0)
    close(noisy, 0.002308096, 1e-12)

    # CLI output validates against the row schema when the binary is built
    exe = ROOT / "target" / "debug" / "qcool"
    if exe.exists():
        cfg_path = ROOT / "target" / "smoke_config.json"
        cfg_path.write_text(json.dumps(configs[0]))
        out = subprocess.run(
            [exe, "analyze", "--config", cfg_path, "--temp-mk", "50", "--freq-ghz", "5"],
            check=True,
            capture_output=True,
            text=True,
        )
        row_schema.validate(json.loads(out.stdout))


def main():
    check_values()
    check_unitaries()
    check_reports()
    print("pyqcool smoke test passed")


if __name__ == "__main__":
    sys.exit(main())
