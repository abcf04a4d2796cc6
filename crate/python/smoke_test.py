"""Smoke test for the ctx_py bindings.

Build and install first:

    pip install --no-build-isolation -e crates/py
"""

import json
from pathlib import Path

import ctx_py

DATA = Path(__file__).resolve().parent.parent / "data"


def read(name):
    return (DATA / name).read_text()


def main():
    path = read("path.json")
    assert ctx_py.scenario_kind(path) == "event"

    tensor = ctx_py.tensor(path, path)
    assert json.loads(tensor) == json.loads(read("tensor_path.json"))
    assert ctx_py.count_sections(tensor) == 64

    verdict = ctx_py.check(tensor, read("tensor_path_model.json"))
    assert json.loads(verdict)["verdict"] == "contextual"
    assert ctx_py.verify_certificate(verdict)

    verdict = ctx_py.check(path, read("path_model.json"))
    assert json.loads(verdict)["verdict"] == "noncontextual"
    assert ctx_py.verify_certificate(verdict)

    bundle = ctx_py.convert(read("chsh.json"), "bundle")
    assert ctx_py.count_sections(bundle) == 16

    report = json.loads(ctx_py.run_laws("gluing", 20, 7))
    assert report["ok"]

    try:
        ctx_py.count_sections(tensor, cap=10)
    except RuntimeError:
        pass
    else:
        raise AssertionError("cap overflow should raise")

    try:
        ctx_py.scenario_kind("{")
    except ValueError:
        pass
    else:
        raise AssertionError("bad JSON should raise")

    print("ok")


if __name__ == "__main__":
    main()
