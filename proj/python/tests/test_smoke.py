import json

import pytest

import qpc


def honest(**extra):
    doc = {"schema_version": 1, "protocol": "proposed", "n": 3, "m": 8, "trials": 200, "seed": 7}
    doc.update(extra)
    return doc


def metric(stats, name):
    return next(m for m in stats["metrics"] if m["name"] == name)


def test_spec_and_expansion():
    assert qpc.ghz_spec(5, 3)["ket"] == "(|010> + |101>)/sqrt2"
    assert qpc.x_expansion(5, 3) == [("+++", 1), ("+--", -1), ("-+-", 1), ("--+", -1)]
    assert qpc.t_xor(7, 4, 1, 2) == 0
    assert qpc.t_xor(7, 4, 2, 4) == 1
    assert qpc.family_size(4) == 16


def test_sampling_respects_t_xor():
    for seed in range(200):
        bits = qpc.sample_measurement(7, 4, [1, 2, 3, 4], "Z", seed)
        assert bits[0] ^ bits[1] == 0
        assert bits[1] ^ bits[3] == 1


def test_closed_forms():
    assert qpc.closed_form("intercept_detection", 1) == pytest.approx(0.25)
    assert qpc.closed_form("tamper_detection", 1) == pytest.approx(0.5)
    assert qpc.closed_form("intercept_detection", 0) == 0.0
    with pytest.raises(ValueError):
        qpc.closed_form("nonsense", 1)


def test_honest_run_is_exact_and_deterministic():
    a = qpc.run_scenario(honest())
    b = qpc.run_scenario(json.dumps(honest()), jobs=3)
    assert a == b
    assert metric(a, "r_exact")["estimate"] == 1.0
    assert metric(a, "verdict_correct")["estimate"] == 1.0
    csv = qpc.stats_to_csv(a)
    assert csv.splitlines()[0] == "name,estimate,ci_low,ci_high,target,trials"


def test_eve_detection_near_closed_form():
    stats = qpc.run_scenario(
        honest(m=4, trials=4000, decoy_count=10, adversary={"kind": "eve_intercept_resend", "params": {"links": [1]}})
    )
    m = metric(stats, "detection_step2")
    assert abs(m["estimate"] - m["target"]) <= 3 * (m["target"] * (1 - m["target"]) / m["trials"]) ** 0.5


def test_config_errors_name_the_field():
    with pytest.raises(qpc.ConfigError, match="^m:"):
        qpc.run_scenario(honest(m=-1))
    with pytest.raises(qpc.ConfigError, match="colour"):
        qpc.run_scenario(honest(colour="red"))


def test_transcript_and_suite():
    t = qpc.transcript(honest(trials=1))
    assert t["status"]["state"] == "completed"
    assert t["events"][0]["step"] == 1
    report = qpc.run_suite(seed=3, criteria=[8])
    assert report["pass"] is True
