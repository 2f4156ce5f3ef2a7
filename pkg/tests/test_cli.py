import os
import subprocess
import sys

from tracegen import parse_trace, validate_independence


def run_cli(*args, env=None):
    full_env = os.environ.copy()
    if env:
        full_env.update(env)
    return subprocess.run(
        [sys.executable, "-m", "tracegen", *args],
        capture_output=True,
        text=True,
        env=full_env,
        timeout=300,
    )


FIG1_PAIR = validate_independence(["a", "b", "c"], [("a", "b")], symmetric_closure=True)


def body_lines(stdout):
    return [l for l in stdout.splitlines() if not l.startswith("#")]


def kv(stdout):
    out = {}
    for line in body_lines(stdout):
        parts = line.split()
        out[" ".join(parts[:-1])] = parts[-1]
    return out


def test_info_fig1(monoid_files):
    res = run_cli("info", "--monoid", monoid_files["fig1"], "--k", "8")
    assert res.returncode == 0
    lines = res.stdout.splitlines()
    assert "letters a b c" in lines
    assert "components 1" in lines
    assert "mobius 1 -3 1" in lines
    assert "cliques 5" in lines
    assert any(l.startswith("p0 0.381966011250105") for l in lines)
    assert "lambda 8 2584" in lines


def test_info_product(monoid_files):
    res = run_cli("info", "--monoid", monoid_files["prod32"], "--k", "2")
    assert res.returncode == 0
    lines = res.stdout.splitlines()
    assert "components 2" in lines
    assert any(l.startswith("component 0 letters=a1,a2,a3 p0=0.3333333") for l in lines)
    assert any(l.startswith("component 1 letters=b1,b2 p0=0.5") for l in lines)
    assert any(l.startswith("p0 0.3333333") for l in lines)
    assert "lambda 2 19" in lines


def test_sample_exact_k_deterministic_and_valid(monoid_files):
    args = ("sample", "--monoid", monoid_files["fig1"], "--mode", "exact-k",
            "--k", "5", "--n", "3", "--seed", "7")
    first = run_cli(*args)
    second = run_cli(*args)
    assert first.returncode == 0
    assert first.stdout == second.stdout  # byte identical
    lines = body_lines(first.stdout)
    assert len(lines) == 3
    for line in lines:
        t = parse_trace(FIG1_PAIR, line)
        assert t.length == 5
    assert "expected_acceptance=" in first.stdout.splitlines()[0]


def test_sample_boundary_round_trip(monoid_files):
    res = run_cli("sample", "--monoid", monoid_files["fig1"], "--mode", "boundary",
                  "--k", "4", "--n", "5", "--seed", "1")
    assert res.returncode == 0
    lines = body_lines(res.stdout)
    assert len(lines) == 5
    for line in lines:
        t = parse_trace(FIG1_PAIR, line)  # validates the layer chain
        assert t.height == 4


def test_sample_boundary_product(monoid_files):
    res = run_cli("sample", "--monoid", monoid_files["prod32"], "--mode", "boundary",
                  "--k", "3", "--n", "4", "--seed", "5")
    assert res.returncode == 0
    assert len(body_lines(res.stdout)) == 4


def test_sample_subuniform(monoid_files):
    args = ("sample", "--monoid", monoid_files["fig1"], "--mode", "subuniform",
            "--p", "0.2", "--n", "10", "--seed", "3")
    first = run_cli(*args)
    assert first.returncode == 0
    assert run_cli(*args).stdout == first.stdout
    for line in body_lines(first.stdout):
        parse_trace(FIG1_PAIR, line)


def test_sample_jobs_deterministic(monoid_files):
    args = ("sample", "--monoid", monoid_files["fig1"], "--mode", "exact-k",
            "--k", "4", "--n", "6", "--seed", "9", "--jobs", "2")
    first = run_cli(*args)
    assert first.returncode == 0
    assert run_cli(*args).stdout == first.stdout
    assert len(body_lines(first.stdout)) == 6


def test_count(monoid_files):
    res = run_cli("count", "--monoid", monoid_files["fig1"], "--k", "6",
                  "--exact", "--mc", "--n", "20000", "--seed", "2")
    assert res.returncode == 0
    vals = kv(res.stdout)
    assert vals["lambda 6"] == "377"
    assert vals["lambda_oracle 6"] == "377"
    est = float(vals["lambda_mc 6"])
    se = float(vals["lambda_mc_se 6"])
    assert abs(est - 377) <= 4 * se


def test_estimate(monoid_files):
    args = ("estimate", "--monoid", monoid_files["fig1"], "--k", "5",
            "--phi", "height", "--n", "5000", "--seed", "11")
    first = run_cli(*args)
    assert first.returncode == 0
    assert run_cli(*args).stdout == first.stdout
    vals = kv(first.stdout)
    assert vals["lambda_exact"] == "144"
    assert float(vals["se"]) > 0
    # ratio and exact-normalized estimates agree within combined noise
    assert abs(float(vals["estimate"]) - float(vals["estimate_exact_norm"])) < 0.1
    assert vals["n"] == "5000"


def test_estimate_reducible_warns(monoid_files):
    res = run_cli("estimate", "--monoid", monoid_files["prod32"], "--k", "3",
                  "--phi", "height", "--n", "500", "--seed", "1")
    assert res.returncode == 0
    assert any("warning reducible" in l for l in res.stdout.splitlines())


def test_estimate_jobs_merge(monoid_files):
    args = ("estimate", "--monoid", monoid_files["fig1"], "--k", "4",
            "--phi", "height", "--n", "2000", "--seed", "3", "--jobs", "2")
    first = run_cli(*args)
    assert first.returncode == 0
    assert run_cli(*args).stdout == first.stdout


def test_verify_ok(monoid_files):
    res = run_cli("verify", "--monoid", monoid_files["fig1"])
    assert res.returncode == 0
    assert res.stdout.splitlines()[-1] == "result ok"
    assert any(l.startswith("check parry_CP_dev") for l in res.stdout.splitlines())


def test_verify_product(monoid_files):
    res = run_cli("verify", "--monoid", monoid_files["prod32"])
    assert res.returncode == 0
    assert any("product_factorization" in l for l in res.stdout.splitlines())
    assert not any("parry" in l for l in res.stdout.splitlines())


def test_exit_codes(monoid_files, tmp_path):
    assert run_cli("sample", "--monoid", "does-not-exist.json",
                   "--mode", "boundary", "--k", "2").returncode == 3
    bad = tmp_path / "bad.json"
    bad.write_text('{"letters": ["a", "a"], "independence": []}', encoding="utf-8")
    assert run_cli("info", "--monoid", str(bad)).returncode == 3
    assert run_cli("sample", "--monoid", monoid_files["fig1"], "--mode", "subuniform",
                   "--p", "0.5", "--n", "1").returncode == 5
    assert run_cli("sample", "--monoid", monoid_files["fig1"], "--mode", "exact-k",
                   "--n", "1").returncode == 2
    assert run_cli("sample", "--monoid", monoid_files["fig1"], "--mode", "exact-k",
                   "--k", "40", "--n", "1", "--seed", "0",
                   "--max-rejects", "1").returncode == 4


def test_clique_cap_env(monoid_files):
    res = run_cli("info", "--monoid", monoid_files["fig1"],
                  env={"TRACEGEN_CLIQUE_CAP": "3"})
    assert res.returncode == 4
    assert "cap" in res.stderr
