import json
import math
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from thetaforge.cli import registry
from thetaforge.cli.campaign import (
    EXIT_CONFIG,
    EXIT_FAIL,
    EXIT_PASS,
    EXIT_SAMPLER,
    plan,
    run_campaign,
    strip_timing,
    to_json,
)
from thetaforge.cli.dsl import THMRN_LEFT, Subset, eval_dsl, evaluate, parse, pretty
from thetaforge.cli.main import main
from thetaforge.cli.rng import SplitMix64, fnv1a64
from thetaforge.cli.sampler import sample_identity_point, sample_point
from thetaforge.errors import (
    ConfigError,
    DslSyntaxError,
    PoleError,
    SamplerExhaustedError,
    UnboundIdentifierError,
)
from thetaforge.thetaids import REGISTRY, thmrn_L
from thetaforge.thetanum import ThetaContext, residual

# published SplitMix64 output for seed 1234567
SPLITMIX_REFERENCE = [6457827717110365317, 3203168211198807973, 9817491932198370423,
                      4593380528125082431, 16408922859458223821]


def test_splitmix_reference_vector():
    rng = SplitMix64(1234567)
    assert [rng.next_u64() for _ in range(5)] == SPLITMIX_REFERENCE


def test_fnv1a_reference():
    # FNV-1a 64 of "a" and of the empty string
    assert fnv1a64("") == 0xCBF29CE484222325
    assert fnv1a64("a") == 0xAF63DC4C8601EC8C


def test_substreams_are_independent_and_reproducible():
    a = SplitMix64.substream(42, "thmrn", 0)
    b = SplitMix64.substream(42, "thmrn", 1)
    c = SplitMix64.substream(42, "thmrn", 0)
    first = a.next_u64()
    assert first == c.next_u64() and first != b.next_u64()


@given(st.integers(0, 2**64 - 1), st.integers(-5, 5), st.integers(0, 9))
def test_randint_in_range(seed, lo, width):
    rng = SplitMix64(seed)
    assert lo <= rng.randint(lo, lo + width) <= lo + width


def test_same_seed_same_point():
    d = REGISTRY["thmrn"]
    assert sample_identity_point(d, 3, 9, 4) == sample_identity_point(d, 3, 9, 4)


def test_ww_constraint_is_satisfied():
    d = REGISTRY["ww"]
    for k in range(20):
        P, _ = sample_identity_point(d, 4, 1, k)
        px, py = math.prod(P["x"]), math.prod(P["y"])
        assert abs(px - py) / abs(px) < 1e-12


def test_forced_coincidence_exhausts_sampler():
    d = REGISTRY["thmrn"]
    with pytest.raises(SamplerExhaustedError):
        sample_identity_point(d, 2, 0, 0, extra={"overrides": {"x_2": "x_1"}})


def test_sampler_rejects_by_probe():
    def probe(P, ctx):
        raise PoleError("always")
    with pytest.raises(SamplerExhaustedError):
        sample_point(REGISTRY["rr"].params, 0, SplitMix64(1), lambda P: [], probe=probe)


# ---------------------------------------------------------------------------
# expression language
# ---------------------------------------------------------------------------

def test_inversion_expression():
    ctx = ThetaContext(0.3)
    assert abs(evaluate("theta(x)+x*theta(1/x)", {"x": 2 + 1j}, ctx)) < 1e-12


def test_subset_sum_expression():
    assert evaluate("sumsubsets(I,2,1, prod(i in I, x_i))", {"x": [2, 3]}) == 5


def test_qpoch_at_one_vanishes():
    assert evaluate("qpoch(1;3)", {"q": 0.4}) == 0


def test_bound_loop_variable():
    tree = parse("sum(k=0..n, tpoch(a;k))")
    assert tree.var == "k"
    val = eval_dsl(tree, {"n": 2, "a": 0.5, "q": 0.3}, ThetaContext(0.1))
    from thetaforge.thetanum import theta_poch
    ctx = ThetaContext(0.1)
    assert abs(val - sum(theta_poch(0.5, 0.3, k, ctx) for k in range(3))) < 1e-14


def test_complex_literal():
    assert evaluate("3+2i", {}) == 3 + 2j


def test_syntax_error_position():
    with pytest.raises(DslSyntaxError) as err:
        parse("theta(")
    assert "1:7" in str(err.value)


@pytest.mark.parametrize("src", ["foo(1)", "theta(1; 2)", "tpoch(1)", "1 +", "(1", "x_"])
def test_malformed_expressions(src):
    with pytest.raises(DslSyntaxError):
        parse(src)


def test_unbound_identifier():
    with pytest.raises(UnboundIdentifierError):
        evaluate("x + 1", {})


def test_subset_complement():
    assert Subset((1, 3), 4).complement() == (2, 4)


ROUNDTRIP_CORPUS = [
    "1", "x", "-x", "x + y", "x - y", "x*y", "x/y", "x^2", "x^-1", "x^n",
    "(x + y)*z", "x*(y + z)", "x - (y - z)", "x - (y + z)", "x/(y*z)", "x/y/z",
    "(x/y)^2", "(-x)^2", "-x^2", "2.5i", "1.5", "x_1", "x_i", "x_(i + 1)", "x_i^2",
    "theta(x)", "theta(x/y)", "theta(-x)", "tpoch(a; n)", "qpoch(a; 3)",
    "theta(q^-r*x_i)", "theta(x)*theta(y)/theta(z)", "1 - theta(x)",
    "sum(k = 0..n, x^k)", "prod(k = 1..3, 1 - q^k)", "sum(i in I, x_i)",
    "prod(j notin I, theta(x_j))", "sumsubsets(I, n, r, prod(i in I, x_i))",
    "sum(r = 0..n, sumsubsets(I, n, r, 1))", "-(x + y)", "x*-y", "x^(n + 1)",
    "a*b*c*d", "a + b + c + d", "a - b + c", "(a + b)/(c - d)", "theta(a)^2",
    "x_1*x_2 - x_2*x_1", "q^(1 - r)", "2*x + 3*y - 4",
]


def test_corpus_size():
    assert len(ROUNDTRIP_CORPUS) == 50


@pytest.mark.parametrize("src", ROUNDTRIP_CORPUS)
def test_pretty_roundtrip(src):
    tree = parse(src)
    assert pretty(tree) == src
    assert parse(pretty(tree)) == tree


def test_transcription_matches_native_evaluator():
    d = REGISTRY["thmrn"]
    worst = 0.0
    for k in range(10):
        P, ctx = sample_identity_point(d, 3, 2024, k)
        env = {"x": P["x"], "v": P["v"], "w": P["w"], "q": P["q"], "t": P["t"], "n": 3}
        dsl = evaluate(THMRN_LEFT, env, ctx)
        worst = max(worst, residual(dsl, thmrn_L(P["x"], P["v"], P["w"], P["q"], P["t"], ctx)))
    assert worst < 1e-10


def test_transcription_roundtrips():
    tree = parse(THMRN_LEFT)
    assert parse(pretty(tree)) == tree


# ---------------------------------------------------------------------------
# registry and campaigns
# ---------------------------------------------------------------------------

def test_registry_lists_every_entry():
    ids = [item["id"] for item in registry.describe()]
    assert len(ids) == len(set(ids))
    assert {"thmrn", "rr", "kawanaka", "thm-vst", "cordmsum"} <= set(ids)


def test_unknown_id():
    with pytest.raises(ConfigError):
        registry.get("nope")


def test_empty_campaign():
    assert run_campaign({"identities": []}) == ([], EXIT_PASS)


def test_single_passing_report():
    reports, code = run_campaign({"identities": [{"id": "rr", "trials": 10, "seed": 42, "tol": 1e-9}]})
    assert code == EXIT_PASS and len(reports) == 1 and reports[0]["pass"]


def test_zero_tolerance_fails():
    reports, code = run_campaign({"id": "rr", "trials": 10, "seed": 42, "tol": 0})
    assert code == EXIT_FAIL and not reports[0]["pass"]


@pytest.mark.parametrize("config", [
    {"identities": [{"id": "rr"}], "bogus": 1},
    {"identities": [{"id": "rr", "trials": -1}]},
    {"identities": [{"id": "rr", "mode": "exact"}]},
    {"identities": [{"id": "rr", "n": 3}]},
    {"identities": [{"id": "nope"}]},
    {"identities": "rr"},
])
def test_config_errors_before_evaluation(config):
    with pytest.raises(ConfigError):
        plan(config)


def test_bad_entry_stops_whole_campaign():
    seen = []
    with pytest.raises(ConfigError):
        run_campaign({"identities": [{"id": "rr"}, {"id": "nope"}]}, emit=seen.append)
    assert seen == []


def test_range_of_n_expands():
    jobs = plan({"identities": [{"id": "thmrn", "n": [1, 3], "mode": "numeric"}]})
    assert [j.params["n"] for j in jobs] == [1, 2, 3]


def test_sampler_exhaustion_exit_code():
    config = {"identities": [{"id": "thmrn", "n": 2, "trials": 2, "overrides": {"x_2": "x_1"}}]}
    reports, code = run_campaign(config)
    assert code == EXIT_SAMPLER and "error" in reports[-1]


CAMPAIGN = {"seed": 42, "trials": 3, "identities": [
    {"id": "rr"}, {"id": "thmrn", "n": [1, 2], "tol": 1e-8},
    {"id": "thm-vst", "N": 1, "m": [2]}, {"id": "kawanaka", "n": 1, "D": 3},
]}


def test_reports_are_byte_identical_modulo_timing():
    a, b = [], []
    run_campaign(CAMPAIGN, emit=a.append)
    run_campaign(CAMPAIGN, emit=b.append)
    assert [strip_timing(x) for x in a] == [strip_timing(x) for x in b]
    assert all("ms" in json.loads(x) for x in a)


def test_report_json_shape():
    reports, _ = run_campaign({"id": "rr", "trials": 2, "seed": 1})
    line = json.loads(to_json(reports[0]))
    assert list(line)[:5] == ["id", "mode", "params", "seed", "trials"]
    assert {"max_residual", "worst_point", "pass", "ms"} <= set(line)


# ---------------------------------------------------------------------------
# command line
# ---------------------------------------------------------------------------

def test_main_verify(capsys):
    assert main(["verify", "--id", "rr", "--trials", "5", "--seed", "3"]) == EXIT_PASS
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 1 and json.loads(out[0])["pass"]


def test_main_verify_param(capsys):
    code = main(["verify", "--id", "thmrn", "--trials", "3", "--param", "n=2", "--tol", "1e-8"])
    assert code == EXIT_PASS
    assert json.loads(capsys.readouterr().out)["params"]["n"] == 2


def test_main_config_file(tmp_path, capsys):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"identities": [{"id": "nis1", "trials": 4}]}))
    assert main(["verify", "--config", str(path)]) == EXIT_PASS


def test_main_exit_codes(capsys):
    assert main(["verify", "--id", "nope"]) == EXIT_CONFIG
    assert main(["verify", "--id", "rr", "--trials", "3", "--tol", "0"]) == EXIT_FAIL
    assert main(["eval", "--expr", "theta("]) == EXIT_CONFIG
    assert "1:7" in capsys.readouterr().err
    with pytest.raises(SystemExit) as exc:
        main(["verify"])
    assert exc.value.code == EXIT_CONFIG


def test_main_eval(capsys):
    assert main(["eval", "--expr", "theta(x)+x*theta(1/x)", "--bind", "x=2+1i", "--bind", "p=0.3"]) == 0
    value = json.loads(capsys.readouterr().out)["value"]
    assert abs(complex(*value)) < 1e-12


def test_main_eval_vector(capsys):
    main(["eval", "--expr", "x_1 + x_2", "--bind", "x=2,3"])
    assert json.loads(capsys.readouterr().out)["value"] == [5.0, 0.0]


def test_list_identities(capsys):
    assert main(["list-identities"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert all("id" in json.loads(x) for x in lines)


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "thetaforge.cli.main", "list-identities"],
                         capture_output=True, text=True, check=True)
    assert '"rr"' in out.stdout
