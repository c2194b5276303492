import math

import prs


def test_taxonomy_lookups():
    tax = prs.load_taxonomy()
    assert prs.VOCAB_SIZE == 78
    assert tax.hypernym_of("pizza") == "food"
    assert tax.hypernym_of("animal") == "animal"
    assert tax.in_category("dog", "animal")
    assert not tax.in_category("dog", "food")
    assert tax.find("bear") >= 0
    assert tax.find("unicorn") == -1
    assert len(tax.mapping()) == prs.NUM_OBJECTS
    assert len(tax.inverse()) == prs.NUM_HYPERNYMS


def test_dataset_assembly():
    tax = prs.load_taxonomy()
    ds = prs.assemble_dataset(7, 100, 0.5, prs.GenConfig(), tax)
    assert len(ds.train) == 80
    assert len(ds.val) == 10
    assert len(ds.test) == 10
    hard = sum(
        1
        for split in (ds.train, ds.val, ds.test)
        for p in split
        if p.difficulty == prs.Difficulty.Hard
    )
    assert hard == 50
    again = prs.assemble_dataset(7, 100, 0.5, prs.GenConfig(), tax)
    assert [p.id for p in again.train] == [p.id for p in ds.train]


def test_candidates_and_grounding():
    tax = prs.load_taxonomy()
    scene = prs.Scene()
    scene.objects = sorted(tax.find(n) for n in ("owl", "pizza", "sun"))
    cands = prs.word_candidates(scene, tax)
    names = [tax.name(u.tokens[0]) for u in cands.candidates]
    assert names == ["owl", "pizza", "sun", "animal", "food", "sky_objects"]

    utt = prs.Utterance()
    utt.tokens = [tax.find("food")]
    full = prs.ListenerProfile.full()
    assert prs.ground(utt, scene, full, tax) == 1
    assert prs.interpret_token("pizza", prs.ListenerProfile.hypernym_only(), tax) == "[UNK]"


def test_selection_chain():
    tax = prs.load_taxonomy()
    pair = prs.ScenePair()
    pair.a = prs.Scene()
    pair.a.id = 0
    pair.a.objects = sorted(tax.find(n) for n in ("pizza", "pie", "sun"))
    pair.b = prs.Scene()
    pair.b.id = 1
    pair.b.objects = sorted(tax.find(n) for n in ("bear", "kite", "sun"))
    pair.target = 0

    full = prs.ListenerProfile.full()
    cands = prs.word_candidates(pair.target_scene(), tax)
    sim = prs.simulate_listener(cands.candidates[0], pair, full, tax)
    assert 0.0 <= sim.p_i <= 1.0

    idx = prs.rational_select(pair, cands, full, tax)
    assert tax.name(cands.candidates[idx].tokens[0]) == "food"

    pol = prs.DisparityPolicy.init(prs.Mode.Word, 1.0, 1.0, 2.0, 50, 0.8, 0)
    utt = prs.Utterance()
    utt.tokens = [tax.find("bear")]
    assert prs.q_score(utt, pol) == 0.5
    theta = [0.0] * prs.VOCAB_SIZE
    theta[tax.find("bear")] = 2.0
    pol.theta = theta  # the attribute is copied on access, so assign whole
    assert math.isclose(prs.q_score(utt, pol), 0.8807970779778823, rel_tol=1e-12)

    rng = prs.Rng(1)
    chosen = prs.pragmatic_select(
        pair, cands, pol, full, prs.SelectMode.Eval, rng, tax
    )
    assert 0 <= chosen.index < len(cands.candidates)


def test_training_and_experiment(tmp_path):
    tax = prs.load_taxonomy()
    cfg = prs.ExperimentConfig()
    cfg.seed = 13
    cfg.n_pairs = 60
    cfg.hard_fraction = 0.5
    cfg.epochs = 5
    cfg.batch = 16
    cfg.repeats = 2

    out = tmp_path / "run"
    res = prs.run_experiment(cfg, str(out))
    assert len(res.policies) == 2
    assert len(res.histories[0].epochs) == 5
    for name in ("accuracy.csv", "shift.csv", "policy_0.json", "history_1.json"):
        assert (out / name).exists()
    header = (out / "accuracy.csv").read_text().splitlines()[0]
    assert header == "speaker,slice,mean,std"

    again = prs.run_experiment(cfg, str(out))
    assert (
        again.accuracy.raw[0][2] == res.accuracy.raw[0][2]
    )  # deterministic reruns

    rows = prs.gain_report(res.accuracy)
    assert [r.slice for r in rows] == ["hard", "easy", "combined"]
