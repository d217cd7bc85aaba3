"""Strict configuration schema: parsing, violations, overrides, round trip."""

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinflip import ConfigError, apply_overrides, parse_config, serialize_config

MINIMAL = {
    "schema_version": 1,
    "wave": {"eta": 2.0, "epsilon_sq": 0.5},
    "particle": {"g": 2.0},
}


def cfg_text(**updates):
    raw = json.loads(json.dumps(MINIMAL))
    raw.update(updates)  # sections are replaced wholesale
    return json.dumps(raw)


class TestParsing:
    def test_minimal_config(self):
        cfg = parse_config(cfg_text(sim={"t_end": 5.0, "steps_per_period": 2000}))
        assert cfg.wave.eta == 2.0
        assert cfg.wave.epsilon_sq == 0.5
        assert cfg.particle.g == 2.0
        assert cfg.frame.mode == "average_rest_frame"
        assert cfg.sim.t_end == 5.0
        assert cfg.scan is None

    def test_epsilon_spelling_is_squared(self):
        cfg = parse_config(cfg_text(wave={"eta": 1.0, "epsilon": 0.6}))
        assert cfg.wave.epsilon_sq == pytest.approx(0.36)

    def test_both_epsilon_spellings_rejected(self):
        raw = json.loads(cfg_text())
        raw["wave"] = {"eta": 1.0, "epsilon": 0.6, "epsilon_sq": 0.36}
        with pytest.raises(ConfigError, match="not both"):
            parse_config(json.dumps(raw))

    def test_syntax_error_reports_position(self):
        with pytest.raises(ConfigError, match=r"line 1 column"):
            parse_config("{bad json")

    def test_epsilon_out_of_range(self):
        with pytest.raises(ConfigError) as err:
            parse_config(cfg_text(wave={"eta": 1.0, "epsilon": 1.5}))
        assert any("wave.epsilon" in v and "1.5" in v for v in err.value.violations)

    def test_missing_eta_reports_key(self):
        raw = json.loads(cfg_text())
        del raw["wave"]["eta"]
        with pytest.raises(ConfigError) as err:
            parse_config(json.dumps(raw))
        assert any(v.startswith("wave.eta") for v in err.value.violations)

    def test_unknown_keys_reported_with_path(self):
        with pytest.raises(ConfigError) as err:
            parse_config(cfg_text(wave={"eta": 1.0, "epsilon_sq": 0.5, "zeta": 3}))
        assert any(v.startswith("wave.zeta") for v in err.value.violations)

    def test_all_violations_collected_at_once(self):
        raw = {
            "schema_version": 99,
            "wave": {"epsilon_sq": 2.0},
            "particle": {},
            "bogus": 1,
        }
        with pytest.raises(ConfigError) as err:
            parse_config(json.dumps(raw))
        text = "\n".join(err.value.violations)
        for fragment in ("schema_version", "wave.eta", "wave.epsilon_sq",
                         "particle.g", "bogus"):
            assert fragment in text
        assert len(err.value.violations) >= 5

    def test_schema_version_required(self):
        raw = json.loads(cfg_text())
        del raw["schema_version"]
        with pytest.raises(ConfigError, match="schema_version"):
            parse_config(json.dumps(raw))

    def test_explicit_frame(self):
        cfg = parse_config(cfg_text(frame={"mode": "explicit", "gamma_z": 1.3}))
        assert cfg.frame.gamma_z == 1.3

    def test_explicit_frame_requires_gamma(self):
        with pytest.raises(ConfigError, match="frame.gamma_z"):
            parse_config(cfg_text(frame={"mode": "explicit"}))

    def test_scan_section(self):
        cfg = parse_config(cfg_text(scan={"eta_min": 0.5, "eta_max": 3.0,
                                          "points": 7}))
        assert cfg.scan.points == 7

    def test_scan_needs_increasing_range(self):
        with pytest.raises(ConfigError, match="eta_max"):
            parse_config(cfg_text(scan={"eta_min": 3.0, "eta_max": 0.5,
                                        "points": 7}))

    def test_scan_needs_two_points(self):
        with pytest.raises(ConfigError, match="scan.points"):
            parse_config(cfg_text(scan={"eta_min": 0.5, "eta_max": 3.0,
                                        "points": 1}))

    def test_steps_floor(self):
        with pytest.raises(ConfigError, match="steps_per_period"):
            parse_config(cfg_text(sim={"steps_per_period": 10}))

    def test_outputs_vocabulary(self):
        with pytest.raises(ConfigError, match="outputs"):
            parse_config(cfg_text(sim={"outputs": ["series", "movie"]}))


class TestRoundTrip:
    def test_parse_serialize_parse(self):
        cfg = parse_config(cfg_text(
            frame={"mode": "explicit", "gamma_z": 1.25},
            sim={"t_end": 3.0, "steps_per_period": 400, "outputs": ["series", "field"]},
            scan={"eta_min": 0.1, "eta_max": 2.0, "points": 5},
        ))
        assert parse_config(serialize_config(cfg)) == cfg

    @given(eta=st.floats(0.0, 10.0), eps_sq=st.floats(0.0, 1.0),
           g=st.floats(-5.0, 5.0).filter(lambda g: abs(g) > 1e-6),
           t_end=st.floats(0.0, 50.0), steps=st.integers(100, 10_000))
    @settings(max_examples=60, deadline=None)
    def test_round_trip_over_random_configs(self, eta, eps_sq, g, t_end, steps):
        text = json.dumps({
            "schema_version": 1,
            "wave": {"eta": eta, "epsilon_sq": eps_sq},
            "particle": {"g": g},
            "sim": {"t_end": t_end, "steps_per_period": steps},
        })
        cfg = parse_config(text)
        assert parse_config(serialize_config(cfg)) == cfg


class TestOverrides:
    def test_set_nested_value(self):
        raw = json.loads(cfg_text())
        out = apply_overrides(raw, ["wave.eta=3.5", "particle.g=2.5"])
        assert out["wave"]["eta"] == 3.5
        assert out["particle"]["g"] == 2.5
        assert raw["wave"]["eta"] == 2.0  # original untouched

    def test_set_creates_missing_sections(self):
        out = apply_overrides(json.loads(cfg_text()),
                              ["frame.mode=explicit", "frame.gamma_z=1.1"])
        assert out["frame"] == {"mode": "explicit", "gamma_z": 1.1}

    def test_set_requires_assignment(self):
        with pytest.raises(ConfigError, match="key.path=value"):
            apply_overrides({}, ["wave.eta"])
