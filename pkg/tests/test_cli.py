"""End-to-end tests for the command-line interface."""

import json

import pytest

from qbozec.cli import ProjectConfig, ConfigError, main

ISO = {
    "datum": {"indices": ["i"], "cartan": [[0]], "symmetrizer": [1]},
    "limits": {"max_height": 6, "max_depth": 6},
}
MIX = {
    "datum": {
        "indices": ["i", "j"],
        "cartan": [[2, -1], [-1, 0]],
        "symmetrizer": [1, 1],
    },
    "limits": {"max_height": 6, "max_depth": 6},
}
SL2 = {
    "datum": {"indices": ["i"], "cartan": [[2]], "symmetrizer": [1]},
    "limits": {"max_height": 6, "max_depth": 6},
}


def write_config(tmp_path, data, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate_passes(tmp_path, capsys):
    cfg = write_config(tmp_path, MIX)
    code, out, _ = run(capsys, "-c", cfg, "validate")
    assert code == 0
    assert "i: real" in out
    assert "j: isotropic" in out
    assert out.strip().endswith("PASS datum axioms and form parameters")


def test_validate_reports_axiom_failure(tmp_path, capsys):
    bad = {
        "datum": {
            "indices": ["i", "j"],
            "cartan": [[2, -1], [-1, 0]],
            "symmetrizer": [1, 2],
        }
    }
    cfg = write_config(tmp_path, bad)
    code, out, _ = run(capsys, "-c", cfg, "validate")
    assert code == 1
    assert out.startswith("FAIL datum axioms")


def test_malformed_config_is_usage_error(tmp_path, capsys):
    cfg = write_config(tmp_path, {"datum": {"indices": ["i"]}})
    code, _, err = run(capsys, "-c", cfg, "validate")
    assert code == 2
    assert "config error" in err
    code, _, err = run(capsys, "-c", str(tmp_path / "missing.json"), "validate")
    assert code == 2


def test_gram_matches_rank_one_isotropic(tmp_path, capsys):
    cfg = write_config(tmp_path, ISO)
    code, out, _ = run(capsys, "-c", cfg, "gram", "--weight", "2*i")
    assert code == 0
    payload = json.loads(out)
    assert payload["weight"] == {"i": 2}
    assert payload["basis"] == [[["i", 1], ["i", 1]], [["i", 2]]]
    assert payload["entries"] == [["2", "1"], ["1", "1"]]


def test_gram_rejects_unknown_index_and_overheight(tmp_path, capsys):
    cfg = write_config(tmp_path, ISO)
    code, _, err = run(capsys, "-c", cfg, "gram", "--weight", "2*z")
    assert code == 2
    assert "position" in err
    code, _, err = run(capsys, "-c", cfg, "gram", "--weight", "7*i")
    assert code == 2
    assert "max_height" in err


def test_crystal_dot_has_four_vertices_at_depth_two(tmp_path, capsys):
    cfg = write_config(tmp_path, ISO)
    code, out, _ = run(
        capsys, "-c", cfg, "crystal", "--depth", "2", "--format", "dot"
    )
    assert code == 0
    assert out.startswith("digraph crystal {")
    assert out.count("label=") - out.count("->") == 4
    assert 'label="(i,1)"' in out
    assert 'label="(i,2)"' in out


def test_crystal_json_module_scope(tmp_path, capsys):
    cfg = write_config(tmp_path, SL2)
    code, out, _ = run(
        capsys, "-c", cfg, "crystal", "--depth", "3", "--lambda", "i=2"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["highest_weight"] == [2]
    # the three-dimensional module: 1, fv, f^(2)v
    assert len(payload["vertices"]) == 3
    assert all(edge["index"] == "i" for edge in payload["edges"])


def test_crystal_depth_limit(tmp_path, capsys):
    cfg = write_config(tmp_path, ISO)
    code, _, err = run(capsys, "-c", cfg, "crystal", "--depth", "7")
    assert code == 2
    assert "max_depth" in err


def test_primitives_levels(tmp_path, capsys):
    cfg = write_config(tmp_path, ISO)
    code, out, _ = run(
        capsys, "-c", cfg, "primitives", "--index", "i", "--max-l", "2"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["index"] == "i"
    assert [lv["l"] for lv in payload["levels"]] == [1, 2]
    assert payload["levels"][0]["expansion"] == [["f[i,1]", "1"]]
    assert payload["levels"][1]["tau"] == "1/2"


def test_primitives_real_index_is_level_one_only(tmp_path, capsys):
    cfg = write_config(tmp_path, SL2)
    code, _, err = run(
        capsys, "-c", cfg, "primitives", "--index", "i", "--max-l", "2"
    )
    assert code == 2
    assert "real" in err
    code, out, _ = run(
        capsys, "-c", cfg, "primitives", "--index", "i", "--max-l", "1"
    )
    assert code == 0


def test_serre_check_passes_on_mix(tmp_path, capsys):
    cfg = write_config(tmp_path, MIX)
    code, out, _ = run(
        capsys, "-c", cfg, "serre-check", "--max-m", "3", "--max-n", "2"
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[-1].startswith("checks=")
    assert all(ln.startswith("PASS serre ") for ln in lines[:-1])
    assert "failed=0" in lines[-1]


def test_global_json_certificates(tmp_path, capsys):
    cfg = write_config(tmp_path, SL2)
    code, out, _ = run(capsys, "-c", cfg, "global", "--height", "3")
    assert code == 0
    payload = json.loads(out)
    assert payload["scope"] == "algebra"
    rows = {row["vertex"]: row for row in payload["rows"]}
    assert rows["f[i,1] f[i,1]"]["expansion"] == [
        ["f[i,1]*f[i,1]", "q/(q^2 + 1)"]
    ]
    assert all(row["bar_fixed"] and row["integral"] for row in payload["rows"])


def test_global_csv_shape(tmp_path, capsys):
    cfg = write_config(tmp_path, ISO)
    code, out, _ = run(
        capsys, "-c", cfg, "global", "--height", "2", "--format", "csv"
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "weight,vertex,expansion,bar_fixed,integral"
    assert len(lines) == 5  # vertex rows: 1, f1, f2, f1 f1
    assert all(ln.endswith("true,true") for ln in lines[1:])


def test_global_module_scope(tmp_path, capsys):
    cfg = write_config(tmp_path, SL2)
    code, out, _ = run(
        capsys, "-c", cfg, "global", "--height", "3", "--lambda", "i=2"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["scope"] == "module"
    assert payload["lambda"] == {"i": 2}
    assert len(payload["rows"]) == 3


def test_verify_command(tmp_path, capsys):
    cfg = write_config(tmp_path, MIX)
    code, out, _ = run(
        capsys, "-c", cfg, "verify", "--suite", "serre", "--height", "4"
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert all(ln.startswith("PASS serre:") for ln in lines[:-1])
    assert lines[-1].endswith("failed=0")


def test_verify_unknown_suite(tmp_path, capsys):
    cfg = write_config(tmp_path, ISO)
    code, _, err = run(
        capsys, "-c", cfg, "verify", "--suite", "bogus", "--height", "2"
    )
    assert code == 2
    assert "unknown suite" in err


def test_outputs_are_deterministic(tmp_path, capsys):
    cfg = write_config(tmp_path, ISO)
    _, first, _ = run(capsys, "-c", cfg, "gram", "--weight", "2*i")
    _, second, _ = run(capsys, "-c", cfg, "gram", "--weight", "2*i")
    assert first == second


def test_cache_round_trip_and_coherence(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("QBOZEC_CACHE_DIR", raising=False)
    cached_cfg = dict(ISO, cache_dir=str(tmp_path / "cache"))
    cfg = write_config(tmp_path, cached_cfg)
    args = ("-c", cfg, "crystal", "--depth", "2", "--format", "dot")
    code, cold, _ = run(capsys, *args)
    assert code == 0
    assert (tmp_path / "cache").is_dir()
    code, warm, _ = run(capsys, *args)
    assert warm == cold
    # deleting the cache never changes output
    for p in sorted((tmp_path / "cache").rglob("*"), reverse=True):
        p.unlink() if p.is_file() else p.rmdir()
    code, fresh, _ = run(capsys, *args)
    assert fresh == cold


def test_env_var_overrides_cache_dir(tmp_path, capsys, monkeypatch):
    env_dir = tmp_path / "envcache"
    monkeypatch.setenv("QBOZEC_CACHE_DIR", str(env_dir))
    cfg = write_config(tmp_path, dict(ISO, cache_dir=str(tmp_path / "unused")))
    code, _, _ = run(capsys, "-c", cfg, "gram", "--weight", "1*i")
    assert code == 0
    assert env_dir.is_dir()
    assert not (tmp_path / "unused").exists()


def test_form_override_changes_gram(tmp_path, capsys):
    plain = write_config(tmp_path, ISO, "plain.json")
    tweaked = write_config(
        tmp_path,
        dict(ISO, form={"default": "1", "overrides": {"i,1": "1/(1-q^2)"}}),
        "tweaked.json",
    )
    _, base, _ = run(capsys, "-c", plain, "gram", "--weight", "1*i")
    _, bent, _ = run(capsys, "-c", tweaked, "gram", "--weight", "1*i")
    assert json.loads(base)["entries"] == [["1"]]
    assert json.loads(bent)["entries"] == [["1/(-q^2 + 1)"]]


def test_config_round_trip():
    cfg = ProjectConfig.from_dict(
        dict(MIX, form={"default": "1", "overrides": {"j,2": "1"}}, cache_dir="/x")
    )
    assert ProjectConfig.from_dict(cfg.to_dict()).to_dict() == cfg.to_dict()


def test_config_rejects_unknown_fields():
    with pytest.raises(ConfigError, match="unknown config fields"):
        ProjectConfig.from_dict(dict(ISO, extra=1))
    with pytest.raises(ConfigError, match="override key"):
        ProjectConfig.from_dict(
            dict(ISO, form={"overrides": {"z,1": "1"}})
        )
    with pytest.raises(ConfigError, match="max_height"):
        ProjectConfig.from_dict(dict(ISO, limits={"max_height": 0}))
