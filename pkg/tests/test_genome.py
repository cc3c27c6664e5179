import json

import numpy as np
import pytest

from minga.errors import ConfigError, ReportIOError
from minga.genome import (
    A,
    B,
    COLLISION_PAIRS,
    GENE_COUNT,
    GENE_GROUPS,
    GENE_HIGH,
    GENE_LOW,
    GENE_SPECS,
    G,
    PREDATOR_CLASSES,
    R,
    SCORE_PAIRS,
    EntityClass,
    Genome,
    crossover,
    gene_index,
    load_genome,
    mutate,
    random_genome,
    save_genome,
    validate,
)


def _genes(**updates):
    genes = [0] * GENE_COUNT
    for index, value in updates.items():
        genes[int(index.lstrip("g"))] = value
    return genes


def test_entity_classes_and_gene_layout():
    assert len(EntityClass) == 4
    assert PREDATOR_CLASSES == (R, G, B)
    assert not A.is_predator
    assert len(COLLISION_PAIRS) == 15
    assert len(SCORE_PAIRS) == 9
    assert GENE_COUNT == len(GENE_SPECS) == 3 + 3 + 15 + 9
    assert [spec.index for spec in GENE_SPECS] == list(range(GENE_COUNT))


def test_gene_index_follows_documented_order():
    assert gene_index("count", R) == 0
    assert gene_index("count", B) == 2
    assert gene_index("move", G) == 4
    assert gene_index("collide", R, R) == 6
    assert gene_index("collide", R, A) == 9
    assert gene_index("collide", A, R) == 18
    assert gene_index("collide", A, B) == 20
    assert gene_index("score", R, R) == 21
    assert gene_index("score", A, R) == 24
    assert gene_index("score", B, G) == 29
    with pytest.raises(KeyError):
        gene_index("collide", A, A)
    with pytest.raises(KeyError):
        gene_index("count", A)


def test_random_genome_respects_ranges():
    for seed in range(50):
        g = random_genome(np.random.default_rng(seed))
        assert validate(g) == []
        assert all(0 <= value <= 20 for value in g.predator_counts)
        assert all(0 <= value <= 3 for value in g.movement_logic)
        assert all(0 <= value <= 2 for value in g.collision_effects)
        assert all(value in (-1, 0, 1) for value in g.score_logic)


def test_random_genomes_from_distinct_seeds_are_distinct():
    genomes = {random_genome(np.random.default_rng(seed)) for seed in range(100)}
    assert len(genomes) >= 99


def test_random_genome_is_deterministic():
    assert random_genome(np.random.default_rng(7)) == random_genome(np.random.default_rng(7))


def test_crossover_of_identical_parents_is_identity():
    rng = np.random.default_rng(1)
    g = random_genome(rng)
    for cut in (1, 15, 29):
        assert crossover(g, g, rng, cut=cut) == g
    assert crossover(g, g, rng) == g


def test_crossover_min_max_forced_cut():
    child = crossover(Genome.minimum(), Genome.maximum(), np.random.default_rng(0), cut=15)
    assert list(child.genes[:15]) == list(GENE_LOW[:15])
    assert list(child.genes[15:]) == list(GENE_HIGH[15:])


def test_crossover_rejects_cut_outside_range():
    g = Genome.minimum()
    with pytest.raises(ConfigError):
        crossover(g, g, np.random.default_rng(0), cut=0)
    with pytest.raises(ConfigError):
        crossover(g, g, np.random.default_rng(0), cut=30)


@pytest.mark.parametrize("trials", [1000, pytest.param(10_000, marks=pytest.mark.slow)])
def test_crossover_positional_provenance(trials):
    rng = np.random.default_rng(2)
    for _ in range(trials):
        a = random_genome(rng)
        b = random_genome(rng)
        child = crossover(a, b, rng)
        assert validate(child) == []
        assert all(c in (x, y) for c, x, y in zip(child.genes, a.genes, b.genes))


@pytest.mark.parametrize("trials", [2000, pytest.param(10_000, marks=pytest.mark.slow)])
def test_mutate_changes_at_most_one_gene_and_stays_valid(trials):
    rng = np.random.default_rng(3)
    for _ in range(trials):
        g = random_genome(rng)
        m = mutate(g, rng)
        assert validate(m) == []
        assert sum(x != y for x, y in zip(g.genes, m.genes)) <= 1


def test_mutate_site_is_uniform():
    rng = np.random.default_rng(4)
    g = Genome.minimum()
    trials = 10_000
    changed = np.zeros(GENE_COUNT)
    for _ in range(trials):
        m = mutate(g, rng)
        diff = [i for i, (x, y) in enumerate(zip(g.genes, m.genes)) if x != y]
        for i in diff:
            changed[i] += 1
    sizes = GENE_HIGH - GENE_LOW + 1
    # 原值被重新抽中时看不到变化
    expected = (1 / GENE_COUNT) * (1 - 1 / sizes)
    assert np.all(np.abs(changed / trials - expected) <= 0.01)


def test_validate_reports_each_violation():
    genes = _genes(g0=21)
    violations = validate(genes)
    assert len(violations) == 1
    assert violations[0].index == 0
    assert violations[0].value == 21
    assert (violations[0].low, violations[0].high) == (0, 20)

    genes = _genes(g4=4, g25=2)
    assert [v.index for v in validate(genes)] == [4, 25]


def test_validate_rejects_wrong_length():
    with pytest.raises(ConfigError, match="30 genes"):
        validate([0] * 29)


def test_invalid_genome_is_unconstructible():
    with pytest.raises(ConfigError, match="gene 0"):
        Genome(tuple(_genes(g0=21)))
    with pytest.raises(ConfigError):
        Genome(tuple([0] * 31))


def test_genome_accessors():
    g = Genome.from_groups(
        [1, 2, 3],
        [0, 1, 2],
        [2] * 15,
        [1, 0, -1, 1, 0, -1, 1, 0, -1],
    )
    assert g.total_predators == 6
    assert g.count(G) == 2
    assert g.movement(B) == 2
    assert g.collision(A, R) == 2
    assert g.collision(A, A) is None
    assert g.score(A, R) == 1
    assert g.score(R, A) == 1
    assert g.score(R, G) == 1
    assert g.score(R, B) == 0
    assert g.score(G, B) == -1
    assert g.score(A, A) == 0


def test_genome_text_formats(tmp_path):
    g = random_genome(np.random.default_rng(5))
    assert json.loads(g.to_json()) == list(g.genes)
    assert Genome.from_json(g.to_json()) == g
    assert Genome.from_csv_row(g.to_csv_row()) == g
    assert str(g).count(";") == GENE_COUNT - 1

    for name in ("g.json", "g.csv"):
        path = save_genome(tmp_path / name, g)
        assert load_genome(path) == g


def test_load_genome_errors(tmp_path):
    with pytest.raises(ReportIOError) as excinfo:
        load_genome(tmp_path / "missing.json")
    assert excinfo.value.path.endswith("missing.json")

    bad = tmp_path / "bad.csv"
    bad.write_text("1,2,3\n")
    with pytest.raises(ConfigError):
        load_genome(bad)

    broken = tmp_path / "broken.json"
    broken.write_text("[1, 2,")
    with pytest.raises(ConfigError):
        load_genome(broken)

    partial = tmp_path / "partial.json"
    partial.write_text(json.dumps({"predator_counts": [1, 2, 3]}))
    with pytest.raises(ConfigError, match="score_logic"):
        load_genome(partial)


def test_load_genome_from_grouped_json(tmp_path):
    groups = {
        "predator_counts": [1, 2, 3],
        "movement_logic": [0, 1, 2],
        "collision_effects": [2] * 15,
        "score_logic": [1, 0, -1, 1, 0, -1, 1, 0, -1],
    }
    path = tmp_path / "rules.json"
    path.write_text(json.dumps(groups))

    g = load_genome(path)
    assert list(g.genes) == [value for name in GENE_GROUPS for value in groups[name]]
    assert g == Genome.from_groups(*groups.values())
