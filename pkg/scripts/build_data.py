#!/usr/bin/env python3
"""Regenerate the data files shipped inside the package.

Deterministic: one fixed seed drives every random choice, so rerunning the
script reproduces byte-identical outputs. See data/PROVENANCE.txt for what
these files represent.

Usage: python scripts/build_data.py
"""
from __future__ import annotations

import csv
import json
import random
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = ROOT / "src" / "citeaudit" / "data"
SEED = 20260822

sys.path.insert(0, str(ROOT / "src"))

from citeaudit.analytics import parse_corpus, summarize  # noqa: E402
from citeaudit.matching import build_vocab  # noqa: E402

# ---------------------------------------------------------------------------
# The five exemplar citations. These anchor the offline fixtures and the
# regression suite; their texts stay in sync with fixtures.json below.

EXEMPLAR_AVATAR = (
    "John Smith and Jane Doe. Deep learning techniques for avatar-based "
    "interaction in virtual environments. Journal of Virtual Worlds, "
    "12(3), 45-67, 2023."
)
EXEMPLAR_PAOLONE = (
    "M. Paolone, T. Gaunt, X. Guillaud, M. Liserre, S. Meliopoulos, "
    "A. Monti, T. Van Cutsem, J. Martinez, and C. Vournas. A benchmark "
    "model for power system stability controls. Electric Power Systems "
    "Research, 189:106812, 2020."
)
EXEMPLAR_EFL = (
    "T. Ige and R. Adewale. The effectiveness of mobile-assisted language "
    "learning on EFL learners' vocabulary acquisition. arXiv preprint "
    "arXiv:2107.13586, 2021."
)
EXEMPLAR_NANDA = (
    "Nanda, N. (2023). Progress in mechanistic interpretability: "
    "Reverse-engineering induction heads in GPT-2. arXiv preprint."
)
EXEMPLAR_DRIVLME = (
    "Firstname Lastname and Others. Drivlme: augmenting llm-based "
    "autonomous driving agents with embodied and social experiences. "
    "arXiv preprint arXiv:XXXX.XXXXX, 2024."
)

EXEMPLARS = [
    (EXEMPLAR_AVATAR, "TF", "SH", "all metadata fabricated; title merely plausible"),
    (EXEMPLAR_PAOLONE, "PAC", "SH", "author list anchors a real 2020 article, title and pages wrong"),
    (EXEMPLAR_EFL, "IH", "SH", "arXiv id belongs to an unrelated survey"),
    (EXEMPLAR_NANDA, "SH", "IH", "author real and active, title absent from every index"),
    (EXEMPLAR_DRIVLME, "PH", "PAC", "template author names and identifier never filled in"),
]

# Primary -> secondary -> count, minus the five exemplar rows above.
MATRIX: dict[str, dict[str, int]] = {
    "TF": {"SH": 50, "IH": 14, "PH": 2},
    "PAC": {"SH": 11, "IH": 14, "PH": 1, "TF": 1},
    "IH": {"SH": 2, "PAC": 1, "PH": 1},
    "PH": {"PAC": 2},
    "SH": {"IH": 1},
}
EXEMPLAR_CONSUMED = [("TF", "SH"), ("PAC", "SH"), ("IH", "SH"), ("SH", "IH"), ("PH", "PAC")]

# Papers P01..P53 with flagged-citation counts: 25 papers with one, 24 with
# two, then 4, 4, 6, 13.
PAPER_COUNTS = [1] * 25 + [2] * 24 + [4, 4, 6, 13]

GIVEN = [
    "A.", "B.", "C.", "D.", "E.", "F.", "G.", "H.", "J.", "K.", "L.", "M.",
    "N.", "P.", "R.", "S.", "T.", "V.", "W.", "Y.",
]
SURNAMES = [
    "Alvarez", "Becker", "Chen", "Dimitrov", "Eriksson", "Fischer", "Garcia",
    "Haddad", "Ivanova", "Johansson", "Kaur", "Lindqvist", "Moreau", "Nguyen",
    "Okafor", "Petrov", "Quinn", "Rossi", "Silva", "Tanaka", "Ueda", "Vargas",
    "Weber", "Xu", "Yamamoto", "Zhao", "Keller", "Brandt", "Novak", "Patel",
]
VENUES = [
    "Journal of Machine Learning Research",
    "Transactions on Neural Networks and Learning Systems",
    "Proceedings of the International Conference on Machine Learning",
    "Advances in Neural Information Processing Systems",
    "Proceedings of the Conference on Empirical Methods in Natural Language Processing",
    "International Journal of Computer Vision",
    "Proceedings of the AAAI Conference on Artificial Intelligence",
    "Pattern Recognition Letters",
    "Computational Linguistics",
    "Proceedings of the International Conference on Learning Representations",
]
NOTES = [
    "",
    "",
    "",
    "no index lists the title, authors unknown",
    "DOI resolves to an unrelated article",
    "authors exist, claimed title absent everywhere",
    "venue and year plausible, work untraceable",
    "identifier malformed, appears machine-generated",
    "template text left in the author field",
    "page range belongs to a different article",
    "title echoes a real paper with altered wording",
]

ADJ = [
    "deep", "robust", "efficient", "scalable", "adaptive", "neural",
    "sparse", "contrastive", "hierarchical", "multimodal", "federated",
    "interpretable", "self-supervised", "lightweight", "probabilistic",
]
TASK = [
    "learning", "optimization", "classification", "segmentation",
    "generation", "estimation", "alignment", "retrieval", "planning",
    "reasoning", "adaptation", "compression", "calibration", "verification",
]
DOMAIN = [
    "natural language processing", "computer vision", "speech recognition",
    "reinforcement learning", "graph representation learning",
    "power system stability analysis", "autonomous driving",
    "medical image analysis", "time series forecasting",
    "language model evaluation", "robotic manipulation",
    "recommendation systems", "program synthesis", "knowledge distillation",
]
OBJECT = [
    "transformers", "convolutional networks", "diffusion models",
    "language models", "graph networks", "policy gradients",
    "attention mechanisms", "embedding spaces", "mixture-of-experts models",
    "variational autoencoders", "recurrent architectures",
]
TEMPLATES = [
    "{adj} {task} for {domain}",
    "{adj} {obj} for {domain}",
    "Towards {adj} {task} in {domain}",
    "On the {task} of {obj}",
    "{adj} and {adj2} {task} with {obj}",
    "Rethinking {task} for {obj}",
    "A {adj} framework for {task} in {domain}",
    "Benchmarking {obj} for {domain}",
    "{adj} {obj}: a study in {domain}",
    "Improving {task} of {obj} under distribution shift",
]

# Seed titles: every content token a regression test relies on appears in at
# least two corpus titles, so build_vocab keeps it.
SEED_TITLES = [
    "Deep learning techniques for avatar based interaction in virtual environments",
    "Avatar based interaction techniques for virtual learning environments",
    "Progress in mechanistic interpretability of deep networks",
    "Reverse engineering induction heads in GPT style transformers",
    "Mechanistic interpretability progress for reverse engineering GPT models",
    "Induction heads and in-context learning in GPT architectures",
    "Augmenting LLM based agents with embodied experiences",
    "Embodied and social experiences for autonomous driving agents",
    "Augmenting autonomous driving with social LLM agents",
    "A benchmark model for power system stability controls",
    "Power system stability controls: a benchmark model survey",
    "The effectiveness of mobile assisted language learning for vocabulary acquisition",
    "Mobile assisted vocabulary acquisition and the effectiveness of language learners",
    "EFL learners and mobile assisted language learning effectiveness",
    "Attention mechanisms you need for sequence transduction",
    "Semantic uncertainty quantification for language models with diversity sampling",
    "Uncertainty quantification and semantic diversity in sampling based language models",
    "Chain-of-thought reasoning limits in multistep soft reasoning tasks",
    "Testing the limits of chain-of-thought with multistep reasoning",
    "Pre-train prompt and predict methods in natural language processing",
    "Prompting methods for pre-train and predict pipelines",
    "Efficient few-shot learning with a single transformer across tasks",
    "Few-shot single transformer models for efficient multitask learning",
    "Large scale multi agent driving benchmark for simulation",
    "Multi agent benchmark environments for large scale driving simulation",
    "Fundamentals of power systems modelling with converter interfaced generation",
    "Converter interfaced generation and power systems modelling fundamentals",
    "Progress measures for grokking via mechanistic interpretability",
    "Grokking progress measures in small transformer models",
    "Finding neurons in a haystack with sparse probing",
    "Sparse probing for finding interpretable neurons",
    "Adam style methods for stochastic optimization",
    "Stochastic optimization methods for deep model training",
]


def synth_title(rng: random.Random) -> str:
    template = rng.choice(TEMPLATES)
    return template.format(
        adj=rng.choice(ADJ),
        adj2=rng.choice(ADJ),
        task=rng.choice(TASK),
        domain=rng.choice(DOMAIN),
        obj=rng.choice(OBJECT),
    ).capitalize()


def build_title_corpus(rng: random.Random, total: int = 5000) -> list[str]:
    titles: list[str] = []
    for title in SEED_TITLES:
        titles.append(title)
        titles.append(title)
    while len(titles) < total:
        titles.append(synth_title(rng))
    return titles[:total]


def synth_authors(rng: random.Random) -> str:
    n = rng.randint(1, 4)
    names = [f"{rng.choice(GIVEN)} {rng.choice(SURNAMES)}" for _ in range(n)]
    if n == 1:
        return names[0]
    return ", ".join(names[:-1]) + f", and {names[-1]}"


def synth_citation(rng: random.Random) -> str:
    authors = synth_authors(rng)
    title = synth_title(rng)
    venue = rng.choice(VENUES)
    year = rng.randint(2018, 2025)
    style = rng.randrange(3)
    if style == 0:
        vol = rng.randint(5, 60)
        issue = rng.randint(1, 12)
        first = rng.randint(1, 900)
        pages = f"{first}-{first + rng.randint(5, 40)}"
        return f"{authors}. {title}. {venue}, {vol}({issue}), {pages}, {year}."
    if style == 1:
        first = rng.randint(100, 9000)
        pages = f"{first}-{first + rng.randint(5, 15)}"
        return f"{authors}. {title}. In {venue}, pp. {pages}, {year}."
    return f"{authors}. {title}. {venue}, {year}."


def build_corpus(rng: random.Random) -> str:
    pairs: list[tuple[str, str]] = []
    consumed = list(EXEMPLAR_CONSUMED)
    for primary, row in MATRIX.items():
        for secondary, count in row.items():
            remaining = count
            if (primary, secondary) in consumed:
                consumed.remove((primary, secondary))
                remaining -= 1
            pairs.extend([(primary, secondary)] * remaining)
    assert len(pairs) == 95, len(pairs)
    rng.shuffle(pairs)

    slots: list[str] = []
    for index, count in enumerate(PAPER_COUNTS, start=1):
        slots.extend([f"P{index:02d}"] * count)
    assert len(slots) == 100

    rows: list[list[str]] = []
    pair_iter = iter(pairs)
    for slot_index, paper_id in enumerate(slots):
        if slot_index < len(EXEMPLARS) and paper_id == f"P{slot_index + 1:02d}":
            text, primary, secondary, note = EXEMPLARS[slot_index]
        else:
            primary, secondary = next(pair_iter)
            text = synth_citation(rng)
            note = rng.choice(NOTES)
        rows.append([paper_id, text, primary, secondary, note])

    import io

    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["paper_id", "citation_text", "primary", "secondary", "notes"])
    writer.writerows(rows)
    return out.getvalue()


def build_fixtures() -> dict:
    liu_authors = [
        "Pengfei Liu", "Weizhe Yuan", "Jinlan Fu", "Zhengbao Jiang",
        "Hiroaki Hayashi", "Graham Neubig",
    ]
    vaswani_authors = [
        "Ashish Vaswani", "Noam Shazeer", "Niki Parmar", "Jakob Uszkoreit",
        "Llion Jones", "Aidan N. Gomez", "Lukasz Kaiser", "Illia Polosukhin",
    ]
    paolone_authors = [
        "M. Paolone", "T. Gaunt", "X. Guillaud", "M. Liserre",
        "S. Meliopoulos", "A. Monti", "T. Van Cutsem", "V. Vittal",
        "C. Vournas",
    ]
    grokking_authors = [
        "Neel Nanda", "Lawrence Chan", "Tom Lieberum", "Jess Smith",
        "Jacob Steinhardt",
    ]
    haystack_authors = [
        "Wes Gurnee", "Neel Nanda", "Matthew Pauly", "Katherine Harvey",
        "Dmitrii Troitskii", "Dimitris Bertsimas",
    ]

    prompt_survey = {
        "title": "Pre-train, Prompt, and Predict: A Systematic Survey of "
        "Prompting Methods in Natural Language Processing",
        "authors": liu_authors,
        "venue": "arXiv",
        "year": 2021,
        "identifiers": [{"kind": "arxiv", "value": "2107.13586"}],
    }
    attention = {
        "title": "Attention Is All You Need",
        "authors": vaswani_authors,
        "venue": "Advances in Neural Information Processing Systems",
        "year": 2017,
        "identifiers": [{"kind": "arxiv", "value": "1706.03762"}],
    }
    adam = {
        "title": "Adam: A Method for Stochastic Optimization",
        "authors": ["Diederik P. Kingma", "Jimmy Ba"],
        "venue": "arXiv",
        "year": 2014,
        "identifiers": [{"kind": "arxiv", "value": "1412.6980"}],
    }
    deep_learning = {
        "title": "Deep learning",
        "authors": ["Yann LeCun", "Yoshua Bengio", "Geoffrey Hinton"],
        "venue": "Nature",
        "year": 2015,
        "pages": "436-444",
        "identifiers": [{"kind": "doi", "value": "10.1038/nature14539"}],
    }
    paolone_real = {
        "title": "Fundamentals of power systems modelling in the presence "
        "of converter-interfaced generation",
        "authors": paolone_authors,
        "venue": "Electric Power Systems Research",
        "year": 2020,
        "pages": "106811",
        "identifiers": [
            {"kind": "doi", "value": "10.1016/j.epsr.2020.106811"}
        ],
    }
    grokking = {
        "title": "Progress measures for grokking via mechanistic interpretability",
        "authors": grokking_authors,
        "venue": "International Conference on Learning Representations",
        "year": 2023,
    }
    haystack = {
        "title": "Finding Neurons in a Haystack: Case Studies with Sparse Probing",
        "authors": haystack_authors,
        "venue": "Transactions on Machine Learning Research",
        "year": 2023,
    }

    outcomes = {
        "arxiv:2107.13586": {"status": "found", "record": prompt_survey},
        "arxiv:1706.03762": {"status": "found", "record": attention},
        "arxiv:1412.6980": {"status": "found", "record": adam},
        "doi:10.1038/nature14539": {"status": "found", "record": deep_learning},
        "doi:10.1109/tnnls.2021.3099999": {"status": "not_found"},
        "arxiv:9999.99999": {"status": "not_found"},
        # Title searches for the exemplar claims: ran fine, found nothing.
        "title:deep learning techniques for avatar based interaction in virtual environments": {"records": []},
        "title:a benchmark model for power system stability controls": {"records": []},
        "title:the effectiveness of mobile assisted language learning on efl learners vocabulary acquisition": {"records": []},
        "title:progress in mechanistic interpretability reverse engineering induction heads in gpt 2": {"records": []},
        "title:drivlme augmenting llm based autonomous driving agents with embodied and social experiences": {"records": []},
        # Title searches for genuine works.
        "title:attention is all you need": {"records": [attention]},
        "title:adam a method for stochastic optimization": {"records": [adam]},
        "title:deep learning": {"records": [deep_learning]},
        # Author-year searches.
        "author:paolone:2020": {"records": [paolone_real]},
        "author:nanda:2023": {"records": [grokking, haystack]},
        "author:smith:2023": {"records": []},
        "author:ige:2021": {"records": []},
    }
    return {"closed_world": True, "outcomes": outcomes}


PROVENANCE = """\
Shipped data provenance
=======================

corpus.csv
  A reconstruction, not a copy of an original coded dataset. The aggregate
  distribution it reproduces (100 coded citations across 53 papers; primary
  counts TF 66 / PAC 27 / IH 4 / PH 2 / SH 1; secondary counts SH 63 /
  IH 29 / PH 4 / PAC 3 / TF 1; per-paper mean 1.89, median 2, range 1-13;
  every row carrying two distinct codes) follows the publicly reported
  GPTZero analysis of AI-fabricated references in NeurIPS 2025 submissions.
  Reconstructed 2026-08-22 by scripts/build_data.py (seed 20260822).
  Apart from a handful of widely quoted example citations, citation_text
  values are synthetic stand-ins, not the originally flagged strings, and
  paper_id values are arbitrary labels.

title_corpus.txt / vocab.txt
  Synthetic titles generated by scripts/build_data.py to give the
  plausibility scorer a stable reference vocabulary; vocab.txt is the
  frozen output of build_vocab over title_corpus.txt.

fixtures.json
  Hand-written lookup outcomes for offline runs. Records describing real
  publications (for example arXiv:1706.03762 or doi:10.1038/nature14539)
  carry their true public metadata; the remaining keys encode deliberately
  unresolvable claims used by the regression suite.
"""


def main() -> None:
    rng = random.Random(SEED)
    DATA_DIR.mkdir(parents=True, exist_ok=True)

    titles = build_title_corpus(rng)
    (DATA_DIR / "title_corpus.txt").write_text(
        "\n".join(titles) + "\n", encoding="utf-8"
    )

    vocab = sorted(build_vocab(titles))
    (DATA_DIR / "vocab.txt").write_text("\n".join(vocab) + "\n", encoding="utf-8")

    corpus_text = build_corpus(rng)
    (DATA_DIR / "corpus.csv").write_text(corpus_text, encoding="utf-8")

    fixtures = build_fixtures()
    (DATA_DIR / "fixtures.json").write_text(
        json.dumps(fixtures, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )

    (DATA_DIR / "PROVENANCE.txt").write_text(PROVENANCE, encoding="utf-8")

    # Self-check: the corpus must summarize to the pinned distribution.
    rows = parse_corpus(corpus_text)
    summary = summarize(rows)
    assert summary.n_citations == 100, summary.n_citations
    assert summary.n_papers == 53, summary.n_papers
    assert summary.primary_counts == {"TF": 66, "PAC": 27, "IH": 4, "SH": 1, "PH": 2}
    assert summary.secondary_counts == {"SH": 63, "IH": 29, "PH": 4, "PAC": 3, "TF": 1}
    assert abs(summary.mean_per_paper - 1.89) <= 0.005, summary.mean_per_paper
    assert summary.median_per_paper == 2
    assert summary.min_per_paper == 1 and summary.max_per_paper == 13
    assert summary.buckets == {"1-2": 49, "3-6": 3, "7+": 1}
    assert summary.compound_rate == 1.0
    print(f"wrote {len(titles)} titles, {len(vocab)} vocab tokens, "
          f"{summary.n_citations} corpus rows to {DATA_DIR}")


if __name__ == "__main__":
    main()
