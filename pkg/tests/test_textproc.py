import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mushannif.corpus import LabeledDocument
from mushannif.errors import ConfigError
from mushannif.textproc import (
    DIACRITICS,
    KHREISAT,
    SYSTEM,
    NormalizationProfile,
    Preprocessor,
    StemmerConfig,
    StopList,
    common_fingerprint,
    is_arabic_letter,
    light_stem,
    load_stemmer_config,
    load_stoplist,
    normalize,
    parse_fingerprint,
    parse_stemmer_config,
    preprocess,
    remove_stopwords,
    tokenize,
)
from mushannif.errors import IncompatiblePreprocessingError

ARABIC_BLOCK = [chr(c) for c in range(0x0600, 0x0700)]
arabic_text = st.text(alphabet=st.sampled_from(ARABIC_BLOCK + list(" 12٣-.،")), max_size=40)
arabic_word = st.text(alphabet=st.sampled_from([chr(c) for c in range(0x0621, 0x0653)]), min_size=1, max_size=12)


@pytest.fixture(scope="module")
def stemmer():
    return load_stemmer_config()


class TestTokenize:
    def test_digits_removed(self):
        assert tokenize("العرب 123 يلعبون") == ["العرب", "يلعبون"]

    def test_empty(self):
        assert tokenize("") == []

    def test_punctuation_separates(self):
        assert tokenize("كرة-القدم") == ["كرة", "القدم"]

    def test_arabic_indic_digits_and_latin(self):
        assert tokenize("هدف٣٤abc لاعب") == ["هدف", "لاعب"]

    def test_tatweel_separates(self):
        assert tokenize("كـرة") == ["ك", "رة"]

    def test_harakat_do_not_split_words(self):
        assert tokenize("كَتَبَ الوَلَدُ") == ["كتب", "الولد"]

    @given(arabic_text)
    def test_only_letters_out(self, text):
        for tok in tokenize(text):
            assert tok
            assert all(is_arabic_letter(ch) for ch in tok)


class TestNormalize:
    @pytest.mark.parametrize(
        "token, profile, expected",
        [
            ("إسلام", SYSTEM, "اسلام"),
            ("آمن", SYSTEM, "امن"),
            ("أحمد", SYSTEM, "احمد"),
            ("مدرسة", SYSTEM, "مدرسه"),
            ("مؤتمر", SYSTEM, "موتمر"),
            ("رئيس", SYSTEM, "رييس"),
            ("لأن", SYSTEM, "لان"),
            ("في", KHREISAT, "فى"),
            ("أمير", KHREISAT, "امير"),
            ("إسلام", KHREISAT, "إسلام"),
            ("مدرسة", KHREISAT, "مدرسة"),
            ("بيت", KHREISAT, "بيت"),
            ("كتب", SYSTEM, "كتب"),
        ],
    )
    def test_examples(self, token, profile, expected):
        assert normalize(token, profile) == expected

    def test_diacritics_stripped(self):
        assert normalize("كَتَبَ", SYSTEM) == "كتب"

    def test_all_diacritics_gives_empty(self):
        assert normalize("َِ", SYSTEM) == ""

    def test_final_map_after_diacritic_removal(self):
        assert normalize("فيَ", KHREISAT) == "فى"

    @settings(max_examples=300)
    @given(arabic_word, st.sampled_from([SYSTEM, KHREISAT]))
    def test_idempotent(self, word, profile):
        once = normalize(word, profile)
        assert normalize(once, profile) == once
        assert not set(once) & DIACRITICS

    def test_non_idempotent_profile_rejected(self):
        with pytest.raises(ConfigError):
            NormalizationProfile("bad", {"أ": "ا", "ا": "ء"})


class TestStopwords:
    def test_removal_preserves_order(self):
        stops = StopList(frozenset({"هو"}))
        assert remove_stopwords(["هو", "يلعب"], stops) == ["يلعب"]

    def test_empty_list_identity(self):
        assert remove_stopwords(["ا", "ب"], StopList(frozenset())) == ["ا", "ب"]

    def test_all_removed(self):
        assert remove_stopwords(["في", "من"], StopList(frozenset({"في", "من"}))) == []

    def test_bundled_list_is_normalized(self):
        stops = load_stoplist(SYSTEM)
        assert len(stops) > 100
        assert all(normalize(w, SYSTEM) == w for w in stops.words)
        assert "الى" in stops and "إلى" not in stops

    def test_khreisat_normalization_of_list(self):
        stops = load_stoplist(KHREISAT)
        assert "فى" in stops and "في" not in stops

    def test_file_with_comments(self, tmp_path):
        f = tmp_path / "stops.txt"
        f.write_text("# header\nهذا\n\nإلى  # trailing\n", encoding="utf-8")
        assert load_stoplist(SYSTEM, f).words == {"هذا", "الى"}


class TestLightStem:
    def test_plural_with_conjunction_and_article(self, stemmer):
        assert light_stem("والمسافرون", stemmer) == "مسافر"
        assert light_stem("المسافرين", stemmer) == "مسافر"

    def test_guard(self, stemmer):
        assert light_stem("من", stemmer) == "من"

    def test_prefix_and_suffix(self, stemmer):
        assert light_stem("المدرسه", stemmer) == "مدرس"

    def test_falls_back_to_shorter_prefix(self, stemmer):
        # "وال" would leave one letter; "و" leaves three
        assert light_stem("والد", stemmer) == "الد"

    def test_one_affix_each_side(self, stemmer):
        assert light_stem("ووالكتابات", stemmer) == "والكتاب"

    def test_affixes_sorted_longest_first(self):
        cfg = StemmerConfig(("و", "وال", "ال"), ("ه", "ات"), 3)
        assert cfg.prefixes == ("وال", "ال", "و")
        assert cfg.suffixes == ("ات", "ه")

    def test_min_stem_len_floor(self):
        with pytest.raises(ConfigError):
            StemmerConfig(("ال",), (), 1)

    def test_config_file(self):
        cfg = parse_stemmer_config("[prefixes]\nال\n# c\n[suffixes]\nات\n")
        assert cfg.prefixes == ("ال",) and cfg.suffixes == ("ات",)

    def test_config_file_errors(self):
        with pytest.raises(ConfigError):
            parse_stemmer_config("ال\n[prefixes]\n")
        with pytest.raises(ConfigError):
            parse_stemmer_config("[infixes]\nا\n")

    @settings(max_examples=300)
    @given(arabic_word)
    def test_never_below_minimum_unless_unchanged(self, word):
        cfg = load_stemmer_config()
        word = normalize(word, SYSTEM) or "ا"
        out = light_stem(word, cfg)
        assert out == word or len(out) >= cfg.min_stem_len
        assert word.endswith(out) or out in word


@pytest.fixture(scope="module")
def pre():
    return Preprocessor.default()


class TestPreprocess:
    def test_digits_and_punctuation_only(self, pre):
        assert pre(LabeledDocument("x", "123 ... ٤٥٦ !!")).tokens == ()

    def test_dedupe(self, stemmer):
        stops = StopList(frozenset())
        out = preprocess(LabeledDocument("x", "كرة كرة قدم"), SYSTEM, stops, stemmer, dedupe=True, stem=False)
        assert out.tokens == ("كره", "قدم")
        assert out.source_id == "x"

    def test_dedupe_after_stemming(self, stemmer):
        stops = StopList(frozenset())
        out = preprocess("المسافرون مسافرين", SYSTEM, stops, stemmer, dedupe=True, stem=True)
        assert out.tokens == ("مسافر",)

    def test_no_stem_keeps_surface(self, stemmer):
        stops = StopList(frozenset())
        out = preprocess("المدرسة", SYSTEM, stops, stemmer, dedupe=False, stem=False)
        assert out.tokens == ("المدرسه",)

    def test_stopwords_dropped_before_stemming(self, pre):
        assert pre("هو في المدرسة").tokens == ("مدرس",)

    def test_fingerprint_changes_with_chain(self):
        a = Preprocessor.default()
        assert a.fingerprint != Preprocessor.default(stem=False).fingerprint
        assert a.fingerprint != Preprocessor.default(profile="khreisat").fingerprint
        assert a.fingerprint != Preprocessor.default(dedupe=False).fingerprint
        assert a.fingerprint == Preprocessor.default().fingerprint
        fields = parse_fingerprint(a.fingerprint)
        assert fields["profile"] == "system" and fields["dedupe"] == "on"

    def test_common_fingerprint_rejects_mixture(self):
        docs = [Preprocessor.default()("كرة"), Preprocessor.default(stem=False)("كرة")]
        with pytest.raises(IncompatiblePreprocessingError):
            common_fingerprint(docs)

    def test_stem_without_config(self):
        with pytest.raises(ConfigError):
            Preprocessor(stem=True, stemmer=None)

    @settings(max_examples=100, deadline=None)
    @given(arabic_text)
    def test_invariants(self, pre, text):
        out = pre(text)
        assert len(set(out.tokens)) == len(out.tokens)
        for tok in out.tokens:
            assert tok and not set(tok) & DIACRITICS
            assert not any(ch.isdigit() for ch in tok)
        assert pre(text) == out
