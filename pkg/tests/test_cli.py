"""The JSON batch front end: output shapes, exit codes, determinism,
and piping one command's output into the next."""

import io
import json

import pytest

from tropab.cli import main


def run(command, doc=None, args=(), text=None):
    """Invoke the CLI in-process; returns (exit code, stdout, stderr)."""
    payload = text if text is not None else json.dumps(doc or {})
    out, err = io.StringIO(), io.StringIO()
    code = main([command, *args], stdin=io.StringIO(payload),
                stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(command, doc, args=()):
    code, out, err = run(command, doc, args)
    assert code == 0, err or out
    return json.loads(out)


# -- exit codes and determinism ---------------------------------------------

def test_snf_success_is_byte_deterministic():
    doc = {"matrix": [[2, 4], [6, 8]]}
    outs = {run("snf", doc)[1] for _ in range(3)}
    assert len(outs) == 1
    got = json.loads(outs.pop())
    assert got["kind"] == "snf"
    assert got["d"] == [2, 4]


def test_domain_error_is_structured_exit_1():
    code, out, err = run("symplectic", {"matrix": [[1, 2], [-2, 0]]})
    assert code == 1
    assert err == ""
    got = json.loads(out)
    assert got["kind"] == "error"
    assert got["code"] == "NotSkew"
    assert "alternating" in got["message"]


def test_malformed_input_exit_2():
    code, out, err = run("snf", text="this is not json")
    assert code == 2
    assert out == ""
    assert "malformed" in err


def test_missing_field_exit_2():
    code, _, err = run("snf", {"wrong_key": [[1]]})
    assert code == 2
    assert "malformed" in err


def test_non_object_toplevel_exit_2():
    code, _, _ = run("snf", text="[1, 2, 3]")
    assert code == 2


def test_bad_rational_exit_2():
    code, _, _ = run("delaunay", {"q": [["1/0"]]})
    assert code == 2


def test_input_file(tmp_path):
    p = tmp_path / "in.json"
    p.write_text(json.dumps({"matrix": [[0, 3], [-3, 0]]}))
    got = run_json("symplectic", None, args=["--input", str(p)])
    assert got["type"] == [3]


def test_text_format():
    code, out, _ = run("poltype", {"matrix": [[2, 0], [0, 6]]},
                       args=["--format", "text"])
    assert code == 0
    assert "type:" in out and "- 2" in out and "- 6" in out


# -- exact linear algebra commands ------------------------------------------

def test_hnf():
    got = run_json("hnf", {"matrix": [[2, 4], [6, 8]]})
    assert got["kind"] == "hnf"
    assert got["h"][1][0] == 0


def test_glxy():
    got = run_json("glxy", {"u": [[1, 1], [0, 1]],
                            "q": [[2, 0], [0, 2]],
                            "y_basis": [[1, 0], [0, 1]]})
    assert got["q"] == [["2", "-2"], ["-2", "4"]]


# -- pavings and piecewise-affine pipelines ---------------------------------

HEX_Q = {"q": [[2, 1], [1, 2]]}


def test_delaunay_hexagonal():
    got = run_json("delaunay", HEX_Q)
    assert got["kind"] == "paving"
    assert got["cells"] == [[[0, 0], [0, 1], [1, 0]],
                            [[0, 0], [1, -1], [1, 0]]]


def test_delaunay_roundtrips_into_voronoi_cone():
    pav = run_json("delaunay", HEX_Q)
    got = run_json("voronoi-cone", {"paving": pav, "q": HEX_Q["q"]})
    assert got["contains"] is True
    got = run_json("voronoi-cone", {"paving": pav,
                                    "q": [[2, -1], [-1, 2]]})
    assert got["contains"] is False


def test_sigma_pipes_into_bend_and_legendre():
    sig = run_json("sigma", {"q": [[1]]})
    assert sig["kind"] == "pw-affine"
    bends = run_json("bend", {"function": sig})
    assert bends["walls"] == [{"vertices": [[0]], "bending": ["1"]}]
    leg = run_json("legendre", {"function": sig, "window": 2})
    assert leg["values"] == [[[-2], "2"], [[-1], "1/2"], [[0], "0"],
                             [[1], "1/2"], [[2], "2"]]


def test_qp_decompose():
    samples = [[[x], str(x * x)] for x in range(-4, 5)]
    got = run_json("qp-decompose", {"samples": samples,
                                    "period_basis": [[1]]})
    assert got["bilinear"] == [["2"]]
    assert got["linear"] == ["0"]
    assert got["periodic"] == [[["0"], "0"]]


def test_cy_cone():
    pav = run_json("delaunay", {"q": [[1]]})
    samples = [[[x], "%d/2" % (x * x)] for x in range(-5, 6)]
    got = run_json("cy-cone", {"samples": samples, "paving": pav,
                               "period_basis": [[1]]})
    assert got["member"] is True


def test_monoid_add():
    sig = run_json("sigma", {"q": [[1]]})
    got = run_json("monoid-add", {
        "function": sig,
        "x": {"degree": 1, "point": [0], "payload": ["0"]},
        "y": {"degree": 1, "point": [3], "payload": ["0"]}})
    assert got == {"kind": "monoid-element", "degree": 2, "point": [3],
                   "payload": ["2"]}


def test_fourier_and_fiber():
    got = run_json("fourier", {"rank": 1, "phi_map": [[3]]})
    assert got["reps"] == [[0], [1], [2]]
    assert got["type"] == [3]
    pav = run_json("delaunay", {"q": [[1]]})
    fib = run_json("fiber", {"paving": pav, "phi_image_basis": [[3]]})
    assert len(fib["components"]) == 3
    assert [(i, j) for i, j, _ in fib["incidences"]] == [(0, 1), (0, 2),
                                                        (1, 2)]


def test_face():
    sig = run_json("sigma", {"q": [[1]]})
    got = run_json("face", {"monoid": {"rank": 1, "functionals": [[1]]},
                            "face_functionals": [[1]],
                            "function": sig})
    assert got["admissible"] is True
    assert got["quotient"]["rank"] == 1


# -- Siegel commands --------------------------------------------------------

def test_trop_at_the_cusp():
    got = run_json("trop", {"tau": [[[0, 2], [0, 1]], [[0, 1], [0, 2]]],
                            "gprime": 1})
    assert abs(got["value"][0][0] - 1.5) < 1e-12


def test_gamma_rejects_non_symplectic():
    code, out, _ = run("gamma", {"tau": [[[0, 1]]], "r": [[1, 1], [1, 1]],
                                 "delta": [1]})
    assert code == 1
    assert json.loads(out)["code"] == "NotSymplectic"


def test_cayley_center():
    got = run_json("cayley", {"tau": [[[0, 1]]]})
    assert got["value"] == [[[0.0, 0.0]]]


# -- Heisenberg commands ----------------------------------------------------

def test_heis_mul():
    got = run_json("heis", {"delta": [3], "modulus": 6,
                            "x": [0, [1], [0]], "y": [0, [0], [1]]})
    assert got == {"kind": "heisenberg-element", "t": 2, "a": [1],
                   "b": [1]}


def test_kw_dimensions():
    got = run_json("kw", {"delta": [3]})
    assert got["spaces"] == [{"index": [0], "dimension": 1},
                             {"index": [1], "dimension": 1},
                             {"index": [2], "dimension": 1}]


def test_balanced_count():
    got = run_json("balanced", {"delta": [2], "modulus": 4})
    assert got["count"] == 4


def test_degen_and_twist():
    doc = {"q": [[1]], "phi_check": [[2]], "d_type": [1], "s_xi": [[0]],
           "lambda": [2], "alpha": [3]}
    got = run_json("degen", doc)
    assert got["a_exp"] == "4" and got["b_exp"] == "12"
    got = run_json("twist", doc)
    assert got["a_exp"] == "0" and got["b_exp"] == "0"


def test_profile():
    got = run_json("profile", {
        "delta": [3], "modulus": 6,
        "section": [[[0], 0], [[1], 0], [[2], 0]],
        "q": [[1]], "phi_map": [[3]]})
    assert got["profile"] == [[[0], "0"], [[1], "1/2"], [[2], "1/2"]]


def test_unknown_command_rejected():
    with pytest.raises(SystemExit):
        main(["frobnicate"], stdin=io.StringIO("{}"),
             stdout=io.StringIO(), stderr=io.StringIO())
