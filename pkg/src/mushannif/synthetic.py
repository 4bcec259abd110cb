"""Seeded two-class Arabic corpora for demos and end-to-end checks.

Each class draws most of its words from its own core vocabulary and the rest
from a shared pool of neutral words, so the classes are separable but not
trivially so: the shared words carry no signal, and some core words take a
definite-article or conjunction prefix the stemmer has to remove.
"""

from __future__ import annotations

import random
from pathlib import Path

from .corpus import Corpus, LabeledDocument

SPORTS = (
    "مباراة لاعب فريق ملعب هدف كرة مدرب بطولة دوري حارس مرمى تسديدة ركلة "
    "جزاء منتخب نادي هجوم دفاع جمهور تعادل فوز خسارة كأس مهاجم تمريرة شوط "
    "صافرة ميدالية سباق رياضة"
).split()

POLITICS = (
    "حكومة وزير برلمان انتخابات رئيس دستور قانون حزب معارضة سفير دبلوماسية "
    "مفاوضات اتفاقية سياسة مجلس نائب تصويت ائتلاف قرار عقوبات سيادة وزارة "
    "مرسوم تشريع استفتاء قمة معاهدة سلطة حقوق دولة"
).split()

SHARED = "يوم مدينة عام خبر صحيفة مساء صباح أسبوع شهر مكان وقت عدد كبير جديد أول".split()

VOCABULARIES = {"sports": SPORTS, "politics": POLITICS}


def make_document(rng: random.Random, core, shared=SHARED, words=30, noise_fraction=0.2) -> str:
    n_noise = round(words * noise_fraction)
    picks = [rng.choice(core) for _ in range(words - n_noise)]
    picks += [rng.choice(shared) for _ in range(n_noise)]
    rng.shuffle(picks)
    out = []
    for i, word in enumerate(picks):
        roll = rng.random()
        if roll < 0.25:
            word = "ال" + word
        elif roll < 0.35:
            word = "وال" + word
        out.append(word)
        if i % 9 == 8:
            out.append(rng.choice(("،", ".", str(rng.randint(1, 99)))))
    return " ".join(out)


def make_corpus(docs_per_class=20, seed=0, words=30, noise_fraction=0.2, vocabularies=None) -> Corpus:
    vocabularies = vocabularies or VOCABULARIES
    rng = random.Random(seed)
    docs = []
    for label in sorted(vocabularies):
        for i in range(docs_per_class):
            text = make_document(rng, vocabularies[label], words=words, noise_fraction=noise_fraction)
            docs.append(LabeledDocument(f"{label}/{label}_{i:03d}.txt", text, label))
    return Corpus.from_documents(docs, classes=sorted(vocabularies))


def write_corpus(corpus: Corpus, root) -> Path:
    root = Path(root)
    for label in corpus.classes:
        (root / label).mkdir(parents=True, exist_ok=True)
    for doc in corpus:
        (root / doc.id).write_text(doc.text + "\n", encoding="utf-8")
    return root
