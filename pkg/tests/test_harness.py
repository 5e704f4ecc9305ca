"""Scenario configuration, report assembly, caches, and the CLI front end."""

import json
import textwrap
from fractions import Fraction
from pathlib import Path

import pytest

from pmcong.cli import main
from pmcong.exact import PValuation
from pmcong.harness import (
    REPORT_SCHEMA,
    ConfigInvalid,
    ScenarioConfig,
    cache_warm,
    jsonable,
    run_scenario,
)

REPO_ROOT = Path(__file__).resolve().parent.parent

SMALL_INI = textwrap.dedent(
    """\
    [scenario]
    p = 3
    conductor = 7
    s_primes = 3, 7
    a = 2
    k_values = 2
    frobenius = 2
    qexp_bound = 2
    ideal_bound = 40
    checks = transfer, delta
    """
)


def _small_config(**overrides):
    kwargs = dict(
        p=3,
        conductor=7,
        s_primes=(3, 7),
        a=2,
        k_values=(2,),
        frobenius=(2,),
        qexp_bound=2,
        ideal_bound=40,
        checks=("transfer", "delta"),
    )
    kwargs.update(overrides)
    return ScenarioConfig(**kwargs)


def test_default_config_shape():
    config = ScenarioConfig.default()
    assert (config.p, config.conductor, config.a) == (3, 7, 2)
    assert config.s_primes == (3, 7)
    assert config.checks == ("crosscheck", "transfer", "delta", "qexp", "sigma")
    level = config.level()
    assert level.modulus == 63
    described = config.describe()
    assert described["frobenius"] == [2, 5]
    assert described["eps_basis"] == "even_orbit_indicators"


def test_bundled_file_matches_default():
    config = ScenarioConfig.from_ini(REPO_ROOT / "configs" / "default.ini")
    assert config.describe() == ScenarioConfig.default().describe()


def test_ini_table_parsing(tmp_path):
    path = tmp_path / "table.ini"
    path.write_text(
        SMALL_INI
        + "eps_basis = table\neps_table = 1:1/2, 8:-3 ; 2:0, 4:7/5\n"
    )
    config = ScenarioConfig.from_ini(path)
    assert config.eps_basis == "table"
    assert config.eps_table == [
        {1: Fraction(1, 2), 8: Fraction(-3)},
        {2: Fraction(0), 4: Fraction(7, 5)},
    ]


def test_ini_rejections(tmp_path):
    with pytest.raises(ConfigInvalid, match="cannot read"):
        ScenarioConfig.from_ini(tmp_path / "absent.ini")
    empty = tmp_path / "empty.ini"
    empty.write_text("[other]\nx = 1\n")
    with pytest.raises(ConfigInvalid, match="scenario"):
        ScenarioConfig.from_ini(empty)
    unknown = tmp_path / "unknown.ini"
    unknown.write_text(SMALL_INI + "colour = blue\n")
    with pytest.raises(ConfigInvalid, match="unknown configuration keys"):
        ScenarioConfig.from_ini(unknown)
    partial = tmp_path / "partial.ini"
    partial.write_text("[scenario]\np = 3\nconductor = 7\n")
    with pytest.raises(ConfigInvalid, match="missing"):
        ScenarioConfig.from_ini(partial)


def test_validation_branches():
    # every standing hypothesis has its own rejection
    cases = [
        (dict(p=4), "odd prime"),
        (dict(p=2, s_primes=(2, 7)), "odd prime"),
        (dict(p=5, s_primes=(3, 7)), "contain p"),
        (dict(s_primes=(3, 7, 15)), "consist of primes"),
        (dict(s_primes=(3, 11), conductor=7), "ramified"),
        (dict(a=0), "must be ≥ 1"),
        (dict(a=1), "a ≥ 2"),
        (dict(k_values=()), "positive"),
        (dict(k_values=(0, 2)), "positive"),
        (dict(k_values=(3,), checks=("qexp",)), "even k"),
        (dict(frobenius=()), "Frobenius"),
        (dict(qexp_bound=0), "bounds"),
        (dict(ideal_bound=0), "bounds"),
        (dict(checks=("transfer", "nonsense")), "unknown checks"),
        (dict(eps_basis="junk"), "eps_basis"),
        (dict(eps_basis="table"), "nonempty"),
    ]
    for overrides, needle in cases:
        with pytest.raises(ConfigInvalid, match=needle):
            _small_config(**overrides)
    # the a=1 restriction only binds the transfer comparison
    shallow = _small_config(a=1, checks=("delta",))
    assert shallow.a == 1


def test_jsonable_conversions():
    value = {
        "plain": Fraction(5),
        "ratio": Fraction(3, 4),
        "negative": Fraction(-7),
        "depth": PValuation.of(2),
        "infinite": PValuation.infinite(),
        3: (Fraction(1, 2), None, True),
    }
    converted = jsonable(value)
    assert converted == {
        "plain": "5",
        "ratio": "3/4",
        "negative": "-7",
        "depth": 2,
        "infinite": "+inf",
        "3": ["1/2", None, True],
    }
    json.dumps(converted)
    assert jsonable(object()).startswith("<object")


def test_run_scenario_report_is_deterministic():
    config = _small_config()
    first = run_scenario(config)
    second = run_scenario(config)
    assert first["schema"] == REPORT_SCHEMA
    assert first["verdict"]
    assert list(first["checks"]) == ["transfer", "delta"]
    assert set(first["timings"]) == {"transfer", "delta"}
    first.pop("timings")
    second.pop("timings")
    assert first == second
    json.dumps(first)  # the whole report must serialize as-is


def test_run_scenario_checks_override():
    config = _small_config()
    report = run_scenario(config, checks=("transfer",))
    assert list(report["checks"]) == ["transfer"]
    assert report["verdict"]
    with pytest.raises(ConfigInvalid, match="unknown checks"):
        run_scenario(config, checks=("bogus",))


def test_cache_warm_is_idempotent_and_heals(tmp_path):
    config = _small_config()
    cache = tmp_path / "cache"
    cache.mkdir()
    first = cache_warm(config, cache)
    assert first["files"]
    assert first["new_files"] == first["files"]
    snapshot = {name: (cache / name).read_bytes() for name in first["files"]}
    second = cache_warm(config, cache)
    assert second["new_files"] == []
    assert second["files"] == first["files"]
    for name, blob in snapshot.items():
        assert (cache / name).read_bytes() == blob
    # corrupt one file: the next warm pass recomputes and heals it
    victim = cache / first["files"][0]
    victim.write_bytes(b"\xff\xfe not a cache file")
    cache_warm(config, cache)
    assert victim.read_bytes() == snapshot[victim.name]


def test_cli_run_and_verify(tmp_path, capsys):
    ini = tmp_path / "small.ini"
    ini.write_text(SMALL_INI)
    out = tmp_path / "report.json"
    assert main(["run", "--config", str(ini), "--json-out", str(out)]) == 0
    printed = capsys.readouterr().out
    assert "check transfer: PASS" in printed
    assert "check delta: PASS" in printed
    assert "overall: PASS" in printed
    report = json.loads(out.read_text())
    assert report["schema"] == REPORT_SCHEMA
    assert report["verdict"] is True
    assert main(["verify", "delta", "--config", str(ini)]) == 0
    printed = capsys.readouterr().out
    assert "check delta: PASS" in printed
    assert "check transfer" not in printed


def test_cli_rejects_bad_config(tmp_path, capsys):
    ini = tmp_path / "bad.ini"
    ini.write_text(SMALL_INI + "colour = blue\n")
    assert main(["run", "--config", str(ini)]) == 2
    assert "configuration error" in capsys.readouterr().err


def test_cli_failure_exit_code(monkeypatch, capsys):
    import pmcong.cli as cli_module

    def fake_run(config, cache_dir=None, checks=None):
        return {
            "schema": REPORT_SCHEMA,
            "config": config.describe(),
            "checks": {"transfer": {"verdict": False}},
            "verdict": False,
            "timings": {},
        }

    monkeypatch.setattr(cli_module, "run_scenario", fake_run)
    assert main(["run"]) == 1
    printed = capsys.readouterr().out
    assert "check transfer: FAIL" in printed
    assert "overall: FAIL" in printed


def test_cli_zeta_base_side(capsys):
    rc = main(
        ["zeta", "--modulus", "63", "--k", "2", "--s-primes", "3,7", "--cls", "2"]
    )
    assert rc == 0
    assert "zeta(1-2; 2 mod 63) = -1079/252" in capsys.readouterr().out


def test_cli_zeta_extension_side(capsys):
    rc = main(
        [
            "zeta",
            "--modulus",
            "7",
            "--k",
            "2",
            "--side",
            "L",
            "--s-primes",
            "7",
            "--p",
            "3",
            "--conductor",
            "7",
        ]
    )
    assert rc == 0
    lines = [l for l in capsys.readouterr().out.splitlines() if l]
    assert lines == [
        "zeta(1-2; 1 mod 7) = 1/7",
        "zeta(1-2; 6 mod 7) = 1/7",
    ]
    # the extension side is meaningless without the field data
    assert main(["zeta", "--modulus", "7", "--k", "2", "--side", "L"]) == 2
    assert "extension side" in capsys.readouterr().err


def test_cli_sigma(capsys):
    assert main(["sigma"]) == 0
    assert "overall: PASS" in capsys.readouterr().out


def test_cli_cache_warm(tmp_path, capsys):
    ini = tmp_path / "small.ini"
    ini.write_text(SMALL_INI)
    cache = tmp_path / "cache"
    assert main(["cache-warm", "--config", str(ini), "--cache-dir", str(cache)]) == 0
    printed = capsys.readouterr().out
    assert "new: " in printed
    assert "kept: " not in printed
    assert main(["cache-warm", "--config", str(ini), "--cache-dir", str(cache)]) == 0
    printed = capsys.readouterr().out
    assert "new: " not in printed
    assert "kept: " in printed
