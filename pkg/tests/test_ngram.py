import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mushannif.errors import ConfigError, DegenerateModelError, ModelFormatError
from mushannif.ngram import (
    NGramModel,
    NGramProfile,
    classify_ngram,
    dice_similarity,
    load_ngram,
    load_profile,
    manhattan_distance,
    ngram_profile,
    profile_from_counts,
    save_ngram,
    save_profile,
    train_ngram,
)
from mushannif.textproc import ProcessedDocument, tokenize

from oracles import dice_sets, rank_distance, trigrams_by_hand

letters = st.sampled_from(list("ابتثجحخدذرسشصضطظعغفقكلمنهوي"))
arabic_text = st.lists(st.text(alphabet=letters, min_size=1, max_size=8), max_size=8).map(" ".join)


def ranks(**kw):
    return NGramProfile(1, tuple(sorted(kw.items(), key=lambda gf: gf[1])), None)


def profile(grams, n=3, L=None):
    return NGramProfile(n, tuple((g, 1) for g in grams), L)


class TestProfile:
    def test_exact_three_letter_token(self):
        assert ngram_profile("كتب").entries == (("كتب", 1),)

    def test_accumulates(self):
        assert ngram_profile("ابج ابج").entries == (("ابج", 2),)

    def test_short_tokens_contribute_nothing(self):
        assert len(ngram_profile("من في")) == 0

    def test_no_cross_token_grams(self):
        assert set(ngram_profile("ابج دهو").grams) == {"ابج", "دهو"}

    def test_order_freq_then_gram(self):
        p = profile_from_counts({"c": 1, "b": 2, "a": 1}, 1)
        assert [g for g, _ in p.entries] == ["b", "a", "c"]
        assert p.rank == {"b": 1, "a": 2, "c": 3}

    def test_truncation(self):
        p = ngram_profile("ابجدهوزحطي", n=3, L=4)
        assert len(p) == 4 and p.penalty == 4

    def test_bad_n(self):
        with pytest.raises(ConfigError):
            ngram_profile("abc", n=0)

    @settings(max_examples=200)
    @given(arabic_text, st.integers(1, 4))
    def test_frequencies_sum_to_positions(self, text, n):
        p = ngram_profile(text, n=n, L=None)
        expected = sum(len(trigrams_by_hand(t, n)) for t in tokenize(text))
        assert sum(f for _, f in p.entries) == expected
        assert ngram_profile(text, n=n, L=None) == p


class TestManhattan:
    def test_swapped_ranks(self):
        assert manhattan_distance(ranks(a=1, b=2), ranks(a=2, b=1)) == 2

    def test_absent_gram_costs_penalty(self):
        cls = NGramProfile(1, (("b", 1),), 300)
        assert manhattan_distance(ranks(a=1), cls) == 300

    def test_untruncated_penalty_is_profile_length(self):
        assert manhattan_distance(ranks(a=1), ranks(b=1, c=2)) == 2

    def test_not_symmetric(self):
        doc = ranks(a=1)
        cls = ranks(a=1, b=2, c=3)
        assert manhattan_distance(doc, cls) == 0
        assert manhattan_distance(cls, doc) == 2

    def test_gram_size_mismatch(self):
        with pytest.raises(ConfigError):
            manhattan_distance(profile(["abc"]), NGramProfile(2, (("ab", 1),)))

    @given(arabic_text, arabic_text)
    def test_matches_rank_oracle(self, a, b):
        p, q = ngram_profile(a, L=None), ngram_profile(b, L=None)
        assert manhattan_distance(p, p) == 0
        assert manhattan_distance(p, q) == rank_distance(p.rank, q.rank, len(q))


class TestDice:
    def test_identical(self):
        assert dice_similarity(profile("xyz"), profile("zyx")) == 1

    def test_disjoint(self):
        assert dice_similarity(profile(["g1"]), profile(["g2"])) == 0

    def test_two_of_three(self):
        assert dice_similarity(profile(["g1", "g2", "g3"]), profile(["g1", "g2", "g4"])) == pytest.approx(2 / 3)

    def test_both_empty(self):
        assert dice_similarity(profile([]), profile([])) == 1

    @given(st.frozensets(st.sampled_from("abcdefg")), st.frozensets(st.sampled_from("abcdefg")))
    def test_properties(self, a, b):
        p, q = profile(sorted(a), n=1), profile(sorted(b), n=1)
        s = dice_similarity(p, q)
        assert s == dice_similarity(q, p) == pytest.approx(dice_sets(a, b))
        assert 0 <= s <= 1
        assert (s == 1) == (a == b)


def _doc(text):
    return ProcessedDocument(tuple(tokenize(text)), "q")


class TestClassify:
    TRAIN = {
        "A": [_doc("المدرسة الكتاب المعلم"), _doc("الطالب الدرس")],
        "B": [_doc("السيارة الطريق"), _doc("المحرك الوقود السرعة")],
    }

    @pytest.mark.parametrize("measure", ["manhattan", "dice"])
    def test_verbatim_training_text(self, measure):
        model = train_ngram(self.TRAIN)
        assert classify_ngram(model, "المدرسة الكتاب المعلم", measure).label == "A"
        assert classify_ngram(model, "المحرك الوقود السرعة", measure).label == "B"

    @pytest.mark.parametrize("measure", ["manhattan", "dice"])
    def test_single_class(self, measure):
        assert classify_ngram({"only": ngram_profile("ابجد")}, "سصع", measure).label == "only"

    def test_identical_profiles_tie(self):
        p = ngram_profile("ابجد")
        assert classify_ngram({"z": p, "m": p}, "ابجد", "dice").label == "m"

    def test_manhattan_scores_negated(self):
        pred = classify_ngram(train_ngram(self.TRAIN), "الكتاب", "manhattan")
        assert all(s <= 0 for s in pred.scores.values())
        assert pred.label == max(pred.scores, key=lambda c: (pred.scores[c], -ord(c[0])))

    def test_empty_model(self):
        with pytest.raises(DegenerateModelError):
            classify_ngram({}, "abc")

    def test_bad_measure(self):
        with pytest.raises(ConfigError):
            classify_ngram({"a": ngram_profile("ابج")}, "ابج", "cosine")

    def test_mismatched_profiles(self):
        with pytest.raises(ConfigError):
            classify_ngram({"a": ngram_profile("ابج", L=10), "b": ngram_profile("ابج", L=20)}, "ابج")

    @settings(max_examples=100, deadline=None)
    @given(arabic_text, arabic_text, arabic_text, st.sampled_from(["manhattan", "dice"]))
    def test_label_is_argmax(self, a, b, probe, measure):
        profiles = {"A": ngram_profile(a), "B": ngram_profile(b)}
        pred = classify_ngram(profiles, probe, measure)
        best = max(pred.scores.values())
        assert pred.label == min(c for c, s in pred.scores.items() if s == best)


class TestFiles:
    def test_profile_round_trip(self, tmp_path):
        p = ngram_profile("المودعين المودعين كتب", L=300)
        save_profile(p, tmp_path / "p")
        lines = (tmp_path / "p").read_text(encoding="utf-8").splitlines()
        assert lines[0] == "mushannif-ngram v1 n=3 L=300"
        assert lines[1] == "الم\t2"
        assert load_profile(tmp_path / "p") == p

    def test_unlimited_profile(self, tmp_path):
        p = ngram_profile("كتب", L=None)
        save_profile(p, tmp_path / "p")
        assert load_profile(tmp_path / "p").truncation is None

    def test_model_round_trip(self, tmp_path):
        model = train_ngram(TestClassify.TRAIN, L=50, fingerprint="fp")
        save_ngram(model, tmp_path / "m")
        back = load_ngram(tmp_path / "m")
        assert back.profiles == model.profiles and back.fingerprint == "fp" and back.L == 50

    @pytest.mark.parametrize("body", ["bogus\n", "mushannif-ngram v1 n=x L=3\n", "mushannif-ngram v1 n=3 L=3\nab\tq\n"])
    def test_bad_profile_file(self, tmp_path, body):
        (tmp_path / "p").write_text(body, encoding="utf-8")
        with pytest.raises(ModelFormatError):
            load_profile(tmp_path / "p")

    def test_model_disagreeing_profile(self):
        with pytest.raises(ConfigError):
            NGramModel({"a": ngram_profile("ابج", L=10)}, 3, 300)
