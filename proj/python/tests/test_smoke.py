import json
import math

import pytest

import vgroup

SQUARES = """<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 100 100">
<rect x="0" y="0" width="10" height="10"/><rect x="12" y="0" width="10" height="10"/>
<rect x="80" y="80" width="10" height="10"/></svg>"""


def test_parse_and_infer():
    doc = vgroup.parse_svg(SQUARES)
    assert len(doc) == 3
    tree = vgroup.infer(doc)
    assert len(tree) == 5
    assert tree.leaf_count == 3
    # The two neighbouring squares are joined first.
    assert sorted(tree.leaves(3)) == [0, 1]
    assert json.loads(doc.to_json())["paths"]


def test_tree_round_trip_and_metrics():
    _, doc, gt = vgroup.synthesize(3)
    assert vgroup.Tree.from_json(gt.to_json()) == gt
    assert vgroup.cted(gt, gt) == 0.0
    assert vgroup.fmi(gt, gt, depth=2) == 1.0
    oracle = vgroup.infer(doc, model="oracle", ground_truth=gt)
    assert vgroup.cted(gt, oracle) == 0.0
    heuristic = vgroup.infer(doc)
    assert 0.0 <= vgroup.cted(gt, heuristic) <= 1.0
    assert vgroup.mean_node_overlap(gt, oracle) == 1.0


def test_containment_and_suggest():
    _, doc, _ = vgroup.synthesize(1, json.dumps({"motifs": ["frames"], "n_groups": 2}))
    parents = vgroup.containment(doc)
    assert any(p is not None for p in parents)
    tree = vgroup.infer(doc, containment=True)
    assert vgroup.realizes_containment(tree, doc)
    best = vgroup.suggest(tree, [0], k=2)
    assert len(best) == 2
    assert best[0][1] == 1.0
    assert math.isclose(vgroup.node_overlap([0], tree), 1.0)


def test_errors():
    with pytest.raises(vgroup.VGroupError):
        vgroup.parse_svg("<svg")
    with pytest.raises(ValueError):
        vgroup.infer(vgroup.parse_svg(SQUARES), model="oracle")
    with pytest.raises(vgroup.VGroupError):
        vgroup.Tree.from_json("[")


def test_train(tmp_path):
    for seed in range(6):
        svg, _, tree = vgroup.synthesize(seed)
        d = tmp_path / f"g{seed}"
        d.mkdir()
        (d / "graphic.svg").write_text(svg)
        (d / "tree.json").write_text(tree.to_json())
    text = vgroup.train(str(tmp_path), json.dumps({"epochs": 1, "triplets_per_epoch": 64, "validation_triplets": 32}))
    model = tmp_path / "model.json"
    model.write_text(text)
    _, doc, _ = vgroup.synthesize(10)
    assert vgroup.infer(doc, model=str(model)).leaf_count == len(doc)
