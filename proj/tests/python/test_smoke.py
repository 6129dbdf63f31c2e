import json
import math

import numpy as np
import pytest

import fracline


def test_feature_names():
    assert len(fracline.FEATURE_NAMES) == 13


def test_gradient_convention():
    assert fracline.line_gradient_deg((0, 0, 3, 4)) == pytest.approx(math.degrees(math.atan(3 / 4)))


def test_canny_vertical_step():
    img = np.full((12, 20), 40, dtype=np.uint8)
    img[:, 10:] = 200
    edges = fracline.canny(img, 50, 150)
    assert edges.shape == img.shape
    assert set(np.unique(edges)) <= {0, 255}
    assert ((edges > 0).sum(axis=1) == 1).all()


def test_detect_vertical_line():
    edges = np.zeros((64, 64), dtype=np.uint8)
    edges[5:55, 20] = 255
    lines = fracline.detect_lines(edges, "standard", seed=3)
    assert len(lines) == 1
    x1, y1, x2, y2 = lines[0]
    assert x1 == x2 == 20
    assert abs(y1 - 5) <= 1 and abs(y2 - 54) <= 1


def test_radiograph_pipeline():
    img, boxes = fracline.synth_xray(2, 200, 320)
    assert img.shape == (320, 200) and img.dtype == np.uint8
    assert len(boxes) == 4
    sweep = fracline.optimize_min_line_length(fracline.edge_map(img), seed=2)
    assert sweep["min_lengths"][0] == 1
    assert sweep["chosen"] in sweep["min_lengths"]
    feats = fracline.extract_features(sweep["borrowed"], 320)
    assert len(feats) == len(sweep["borrowed"])
    assert all(len(f) == 16 for f in feats)
    lo, hi = fracline.bone_bounds(sweep["borrowed"], 200)
    assert 0 <= lo < hi < 200


def test_train_and_score():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(120, 16))
    y = np.where(x[:, 0] > 0, 1.0, -1.0)
    model, trace = fracline.train(x.tolist(), y.tolist(), max_epochs=150, seed=4)
    assert trace[-1] < trace[0]
    scores = [fracline.infer(model, row) for row in x.tolist()]
    assert fracline.roc_auc(scores, (y > 0).tolist()) > 0.95
    assert json.loads(model)["layer_sizes"] == [16, 17, 17, 1]


def test_pca_sums_to_one():
    rng = np.random.default_rng(1)
    base = rng.normal(size=(200, 1))
    rows = np.hstack([base + 0.1 * rng.normal(size=(200, 1)) for _ in range(4)])
    r = fracline.pca_contribution(rows.tolist())
    assert sum(r["contributions"]) == pytest.approx(1.0)


def test_errors_surface_as_exceptions():
    with pytest.raises(fracline.FraclineError):
        fracline.roc_auc([0.1, 0.2], [True, True])
    with pytest.raises(ValueError):
        fracline.canny(np.zeros(5, dtype=np.uint8))
    assert "standard" in json.loads(fracline.default_config())
