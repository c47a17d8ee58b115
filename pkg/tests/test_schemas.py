import json
from pathlib import Path

import jsonschema
import pytest
from referencing import Registry, Resource

from tfzero.cli import RUNCONFIG_SCHEMA, VERDICT_SCHEMA, main, parse_config
from tfzero.core import (
    ConvExpExp,
    Gaussian,
    GumbelExp,
    HermiteCombo,
    Indicator,
    MonomialExp,
    OneSidedExp,
    Sampled,
    StepFunction,
)
from tfzero.hurwitz import build_An, routh_hurwitz
from tfzero.kernels import FormulaId, KernelPair
from tfzero.oracle import GridSpec
from tfzero.polyanalytic import polyanalytic_bargmann
from tfzero.zeros import scan

DOCS = Path(__file__).resolve().parents[1] / "docs"


def schema(name):
    return json.loads((DOCS / f"{name}.schema.json").read_text())


def registry():
    return Registry().with_resources(
        (p.name, Resource.from_contents(json.loads(p.read_text()))) for p in DOCS.glob("*.schema.json"))


def roundtrip(obj):
    return json.loads(json.dumps(obj))


@pytest.mark.parametrize("f", [Gaussian(1 + 1j), OneSidedExp(2.0, True), ConvExpExp(1.0, 2.0, -1),
                               MonomialExp(3, 1.0), GumbelExp(1.0, 2.0), HermiteCombo((1, 2j)),
                               StepFunction((0.0, 1.0), (2.0,)), Indicator(),
                               Sampled(knots=(0.0, 1.0), values=(1.0, 2.0)),
                               Sampled(OneSidedExp(1.0), True)],
                         ids=lambda f: f.family)
def test_function_spec_schema(f):
    jsonschema.validate(roundtrip(f.to_json()), schema("function_spec"))


def test_kernel_pair_schema():
    for fid in FormulaId:
        v = jsonschema.Draft202012Validator(schema("kernel_pair"), registry=registry())
        v.validate(roundtrip(KernelPair(fid, {}).to_json()))


def test_zero_report_schema():
    rep = scan(KernelPair(FormulaId.SYM_EXP, {}), GridSpec.square(-3, 3, 41))
    jsonschema.validate(roundtrip(rep.to_dict()), schema("zero_report"))


def test_stability_report_schema():
    for p in (build_An(5), [1, 0, 1], [3]):
        jsonschema.validate(roundtrip(routh_hurwitz(p).to_dict()), schema("stability_report"))


def test_polyanalytic_schema():
    Qp = polyanalytic_bargmann([1, 2j], [0, 1, 3])
    jsonschema.validate(roundtrip(Qp.to_dict()), schema("polyanalytic_polynomial"))


def test_run_config_schema():
    assert schema("run_config") == RUNCONFIG_SCHEMA
    for argv in (["scan", "--pair", "Gauss", "--grid", "-1,1,3,-1,1,3"],
                 ["polyb", "--P", "1", "--Q", "0,1j"],
                 ["reproduce", "ex3_2"]):
        jsonschema.validate(roundtrip(parse_config(argv).to_json()), RUNCONFIG_SCHEMA)


def test_verdict_schema(tmp_path, capsys):
    assert schema("verdict") == VERDICT_SCHEMA
    main(["reproduce", "ex3_4", "--out-dir", str(tmp_path)])
    capsys.readouterr()
    jsonschema.validate(json.loads((tmp_path / "ex3_4.json").read_text()), VERDICT_SCHEMA)


def test_schemas_are_valid_documents():
    for path in DOCS.glob("*.schema.json"):
        jsonschema.Draft202012Validator.check_schema(json.loads(path.read_text()))
