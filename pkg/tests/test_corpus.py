import pytest

from uft import corpus
from uft.corpus import (ManifestError, negative_suite, parse_manifest, run_negative_suite, verify_manifest)
from uft.kernel import Checker, EMPTY
from uft.level import show_level
from uft.syntax import Scope, parse_term, resolve_term


def test_corpus_size_and_axioms(corpus_env):
    assert len(corpus_env) >= 40
    postulates = {d.name for d in corpus_env if d.is_postulate}
    assert postulates == {"funext", "propext"}


def test_required_definitions_present(corpus_env):
    required = """isContr isProp isSet fiber isEquiv ≃ funext propext isSmall isLocallySmall isSmallMap
        isSection retract isEmbedding Ω ∃ ∨ Propositional-Resizing Ω-Resizing Ω¬¬-Resizing image isSurjection
        corestriction corestriction-is-surjective isEqRel quotient η/ VTrunc vtr Poset δ isDeltaComplete Δ
        strictlyBelow isPositiveElement isNontrivial isPositive isLocallySmallPoset 𝒫 L totalSpace
        isVCovered Lift""".split()
    missing = [n for n in required if n not in corpus_env]
    assert not missing


def test_corestriction_is_surjective_is_a_proof(corpus_env):
    assert corpus_env["corestriction-is-surjective"].body is not None


def test_univalence_optional():
    env = corpus.load_corpus(univalence=True)
    assert env["univalence"].is_postulate
    assert "univalence" not in corpus.load_corpus()


def test_delta_well_formed(corpus_env):
    k = Checker(corpus_env)
    names = ["P", "x", "y", "l", "Q"]
    tys = ["Poset {0} {0}", "carrier {0} {0} P", "carrier {0} {0} P", "order {0} {0} P x y", "Ω {0}"]
    ctx = EMPTY
    for n, ty in zip(names, tys):
        t = resolve_term(parse_term(ty), Scope(corpus_env.arities(), {}, list(ctx.names)))
        t2, _ = k.check_type(ctx, t)
        ctx = ctx.bind(n, k.eval_in(ctx, t2))
    scope = Scope(corpus_env.arities(), {}, list(ctx.names))
    target = resolve_term(parse_term("𝟙 0 + fst Q → carrier {0} {0} P"), scope)
    tyv = k.eval_in(ctx, k.check_type(ctx, target)[0])
    k.check(ctx, resolve_term(parse_term("δ {0} {0} {0} P x y l Q"), scope), tyv)


class TestManifest:
    def test_shipped_manifest_passes(self, corpus_env):
        entries = parse_manifest(corpus.MANIFEST.read_text(encoding="utf-8"))
        results = verify_manifest(corpus_env, entries)
        assert len(results) >= 6
        assert all(r.passed for r in results), [r.message for r in results if not r.passed]

    def test_entries_exist(self, corpus_env):
        for e in parse_manifest(corpus.MANIFEST.read_text(encoding="utf-8")):
            assert e.name in corpus_env
            assert len(corpus_env[e.name].telescope) == e.arity

    @pytest.mark.parametrize("name,arity,level", [
        ("image", 2, "u ⊔ v"), ("VTrunc", 1, "lsuc u"), ("isSmall", 2, "lsuc v ⊔ u"),
        ("quotient", 2, "lsuc v ⊔ u"), ("Ω", 1, "lsuc v")])
    def test_single_entries(self, corpus_env, name, arity, level):
        [r] = verify_manifest(corpus_env, parse_manifest(f"{name} ; {arity} ; {level} ; x"))
        assert r.passed

    def test_tampered_entry(self, corpus_env):
        [r] = verify_manifest(corpus_env, parse_manifest("Ω ; 1 ; v ; tampered"))
        assert not r.passed
        assert r.message == "expected v, inferred lsuc v"
        assert r.row() == ("FAIL", "Ω", "v", "lsuc v")

    def test_missing_declaration(self, corpus_env):
        [r] = verify_manifest(corpus_env, parse_manifest("nosuch ; 0 ; 0 ; x"))
        assert not r.passed and "nosuch" in r.message

    def test_wrong_arity(self, corpus_env):
        [r] = verify_manifest(corpus_env, parse_manifest("Ω ; 2 ; lsuc v ; x"))
        assert not r.passed

    def test_not_a_universe(self, corpus_env):
        [r] = verify_manifest(corpus_env, parse_manifest("id ; 1 ; u ; x"))
        assert not r.passed

    def test_empty(self):
        assert parse_manifest("# only a comment\n\n") == []

    @pytest.mark.parametrize("text", ["Ω ; 1 ; lsuc v", "Ω ; one ; v ; x", "Ω ; 1 ; lsuc ( ; x"])
    def test_malformed(self, text):
        with pytest.raises(ManifestError) as info:
            parse_manifest(text)
        assert info.value.code == "malformed-manifest"

    def test_levels_print_as_shipped(self, corpus_env):
        for r in verify_manifest(corpus_env, parse_manifest(corpus.MANIFEST.read_text(encoding="utf-8"))):
            assert show_level(r.inferred) == r.entry.level_text


class TestNegativeSuite:
    def test_all_fail_as_expected(self, corpus_env):
        results = run_negative_suite(corpus_env, negative_suite())
        assert len(results) >= 3
        assert all(r.passed for r in results), [(r.case.path.name, r.actual) for r in results if not r.passed]

    def test_required_cases(self):
        kinds = {c.path.stem: c.expected for c in negative_suite()}
        assert kinds["omega-small"] == kinds["vtrunc-small"] == kinds["type-in-type"] == "level-mismatch"

    def test_accepted_file_fails_the_case(self, corpus_env, tmp_path):
        p = tmp_path / "fine.uft"
        p.write_text("-- expect: level-mismatch\nok : U 1\nok = U 0\n", encoding="utf-8")
        [r] = run_negative_suite(corpus_env, [corpus.read_negative_case(p)])
        assert not r.passed and r.actual is None

    def test_missing_header(self, tmp_path):
        p = tmp_path / "x.uft"
        p.write_text("ok : U 1\nok = U 0\n", encoding="utf-8")
        with pytest.raises(ManifestError):
            corpus.read_negative_case(p)
