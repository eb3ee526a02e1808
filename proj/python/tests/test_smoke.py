import json

import pytest

import crashwatch as cw


def test_tokenize_and_stem():
    tt = cw.normalize_tokenize("Major Accident!! on I-66")
    assert tt.tokens == ["major", "accident", "on", "i", "66"]
    tt = cw.normalize_tokenize("@wtoptraffic accident at w267 #DCtraffic")
    assert tt.tokens == ["accident", "at", "w267"]
    assert tt.mentions == ["wtoptraffic"]
    assert tt.hashtags == ["dctraffic"]
    assert cw.porter_stem("accident") == "accid"
    assert cw.porter_stem("caresses") == "caress"


def test_stopwords_and_matrix():
    kept = cw.filter_stopwords(["i", "am", "waiting", "at", "the", "exit"], {"i", "am", "at", "the"})
    assert kept == ["waiting", "exit"]
    m = cw.build_binary_matrix([["crash", "lane"], ["crash"], ["coffee"]], [1, 1, 0])
    assert m.vocabulary == ["coffee", "crash", "lane"]
    assert m.rows() == 3 and m.cols() == 3
    assert m.row(0) == [0, 1, 1]
    assert m.cell(2, 0) and not m.cell(2, 1)


def test_phi_and_feature_selection():
    assert cw.phi_coefficient([1, 1, 0, 0], [1, 1, 0, 0]) == pytest.approx(1.0)
    assert cw.phi_coefficient([1, 1, 1, 1], [1, 1, 0, 0]) is None
    rows = [["crash", "blocked"], ["crash", "blocked"], ["crash"],
            ["coffee"], ["sunset"], ["coffee", "sunset"]]
    fs = cw.select_features(cw.build_binary_matrix(rows, [1, 1, 1, 0, 0, 0]),
                            0.5, 0.1, 0.8)
    assert "crash" in [f.token for f in fs.individual]
    assert any(r.token_a == "blocked" and r.token_b == "crash" for r in fs.paired)


def test_mlp_learns_xor():
    xs = [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]]
    ys = [0, 1, 1, 0]
    cfg = cw.TrainConfig(alpha=0.2, loss_threshold=1e-3, max_epochs=5000,
                         seed=42, init_scale=0.5)
    trained = cw.train_mlp(xs, ys, [2, 10, 5, 2], cfg)
    assert [cw.mlp_predict(trained.params, x) for x in xs] == ys
    p = cw.mlp_predict_proba(trained.params, [0.0, 1.0])
    assert p[0] + p[1] == pytest.approx(1.0)


def test_mlp_json_roundtrip():
    params = cw.init_mlp([3, 4, 2], seed=7, init_scale=0.1)
    clone = cw.parse_mlp_params_json(cw.mlp_params_json(params))
    assert clone.layer_sizes == [3, 4, 2]
    for x in ([0.0, 1.0, 0.5], [1.0, 1.0, 1.0]):
        assert cw.mlp_predict_proba(clone, x) == cw.mlp_predict_proba(params, x)


def test_lstm_ordering_signal():
    params = cw.init_lstm(input_dim=3, hidden_dim=4, seed=77, init_scale=0.6)
    ab = cw.lstm_classify(params, [0, 1])
    ba = cw.lstm_classify(params, [1, 0])
    assert ab != ba
    assert ab[0] + ab[1] == pytest.approx(1.0)


def test_metrics_and_cv():
    m = cw.metrics_from_counts(cw.ConfusionCounts(8, 2, 3, 7))
    assert m.accuracy == 0.75
    assert m.precision_accident == 0.8
    assert m.precision_nonaccident == 0.7

    labels = [1] * 10 + [0] * 20
    report = cw.cross_validate(labels, lambda train, test: [0] * len(test), 5, 42)
    assert report.mean_accuracy == pytest.approx(2 / 3, abs=1e-12)
    assert report.mean_precision_accident is None
    assert len(report.per_fold) == 5


def test_geo_and_scores():
    assert cw.haversine_miles(38.9, -77.0, 38.9, -77.0) == 0.0
    assert cw.haversine_miles(38.9, -77.0, 38.9, -77.1) == pytest.approx(5.378, abs=0.01)
    assert cw.abnormal_degree(500.0, 500.0, 100.0) == 0.5
    assert cw.abnormal_degree(696.0, 500.0, 100.0) == pytest.approx(0.975, abs=1e-3)
    with pytest.raises(cw.ValidationError):
        cw.abnormal_degree(1.0, 1.0, 0.0)


def test_map_matching():
    rec = cw.AccidentRecord(cw.AccidentKind.collision, 38.90, -77.00,
                            1500000, 1503600, "I-66")
    tweets = [cw.Tweet("t1", 1500120, 38.90, -77.00),
              cw.Tweet("t2", 1500120, 20.00, -77.00)]
    res = cw.map_match_log(tweets, [rec], 4.0, 1.0)
    assert res[0].matched and res[0].phase == cw.MatchPhase.during
    assert res[0].time_offset_minutes == pytest.approx(2.0)
    assert not res[1].matched


def test_pipeline_end_to_end(tmp_path):
    cfg = cw.PipelineConfig()
    cfg.tweets = str(tmp_path / "tweets.jsonl")
    cfg.out_dir = str(tmp_path)
    cfg.n_accident = 40
    cfg.max_epochs = 120
    for name in ("synth", "preprocess", "features", "train", "evaluate"):
        cw.run_command(name, cfg)
    metrics = json.loads((tmp_path / "metrics.json").read_text())
    assert 0.0 <= metrics["mean"]["accuracy"] <= 1.0
    assert (tmp_path / "model.json").exists()


def test_config_errors():
    cfg = cw.PipelineConfig()
    cfg.conf_min = 1.5
    with pytest.raises(cw.ConfigError):
        cw.validate_config(cfg)
    with pytest.raises(cw.ConfigError):
        cw.run_command("frobnicate", cw.PipelineConfig())
    with pytest.raises(cw.ValidationError):
        cw.build_binary_matrix([], [])
