import itertools

import pytest
from hypothesis import given, strategies as st

from generators import exprs_strategy
from uft import core as c
from uft.errors import TypeCheckError
from uft.kernel import (EMPTY, Checker, GlobalEnv, NbE, check_declaration, check_declarations, infer_level_of,
                        inferred_type)
from uft.kernel.values import HPostulate, VNeutral, VUniv, VZero, arrow, var
from uft.level import Level, LevelVar, lmax, lsuc, lvar
from uft.syntax import Scope, parse, parse_term, resolve, resolve_term

u, v = LevelVar("u", 0), LevelVar("v", 1)
TELE = {"u": u, "v": v, "ℓ": u}

SMALL = """
isProp : {u : Level} → U u → U u
isProp = λ X → Π (x y : X) → Id X x y

Ω : {u : Level} → U (lsuc u)
Ω = Σ (P : U u) , isProp {u} P

VTrunc : {u : Level} → U u → U (lsuc u)
VTrunc = λ X → Π (P : U u) → isProp {u} P → (X → P) → P

idFunctionType : U 1
idFunctionType = Π (A : U 0) → A → A

add : ℕ → ℕ → ℕ
add = λ m n → natElim (λ _ → ℕ) n (λ _ ih → suc ih) m

postulate funext : {u v : Level} → Π (X : U u) (B : X → U v) (f g : Π (x : X) → B x) →
  (Π (x : X) → Id (B x) (f x) (g x)) → Id (Π (x : X) → B x) f g
"""


def load(src, env=None):
    env = env if env is not None else GlobalEnv()
    return check_declarations(resolve(parse(src), env.arities()), env)


@pytest.fixture(scope="module")
def env():
    return load(SMALL)


class Ctx:
    """A checker context built from ``name : type`` source strings."""

    def __init__(self, env, *binds, unit_eta=True):
        self.k = Checker(env, unit_eta)
        self.env = env
        self.ctx = EMPTY
        for b in binds:
            name, ty = (s.strip() for s in b.split(":", 1))
            t, _ = self.k.check_type(self.ctx, self.term(ty))
            self.ctx = self.ctx.bind(name, self.k.eval_in(self.ctx, t))

    def term(self, text):
        return resolve_term(parse_term(text), Scope(self.env.arities(), TELE, list(self.ctx.names)))

    def value(self, text):
        t, _ = self.k.infer(self.ctx, self.term(text))
        return self.k.eval_in(self.ctx, t)

    def type_value(self, text):
        t, _ = self.k.check_type(self.ctx, self.term(text))
        return self.k.eval_in(self.ctx, t)

    def infer(self, text):
        return self.k.infer(self.ctx, self.term(text))[1]

    def check(self, text, ty):
        return self.k.check(self.ctx, self.term(text), self.type_value(ty))

    def quote(self, val, ty):
        return self.k.quote(self.ctx.types, val, self.type_value(ty))

    def conv(self, a, b, ty):
        ty_v = self.type_value(ty)
        return self.k.conv(self.ctx.types, self.check_value(a, ty_v), self.check_value(b, ty_v), ty_v)

    def check_value(self, text, ty_v):
        return self.k.eval_in(self.ctx, self.k.check(self.ctx, self.term(text), ty_v))


class TestEvaluation:
    def test_beta(self, env):
        assert isinstance(NbE(env).eval((), resolve_term(parse_term("(λ x → x) zero"), Scope({}))), VZero)

    def test_nat_elim_successor_rule(self, env):
        x = Ctx(env, "ps : ℕ → ℕ → ℕ")
        lhs = x.value("natElim (λ _ → ℕ) zero ps (suc zero)")
        rhs = x.value("ps zero (natElim (λ _ → ℕ) zero ps zero)")
        assert x.quote(lhs, "ℕ") == x.quote(rhs, "ℕ") == x.term("ps zero zero")

    def test_trunc_elim_beta(self, env):
        x = Ctx(env, "A : U 0", "P : U 0", "h : Π (p q : P) → Id P p q", "f : A → P", "a : A")
        lhs = x.value("truncElim h f ∣ a ∣")
        assert x.quote(lhs, "P") == x.term("f a")

    def test_j_on_refl(self, env):
        x = Ctx(env, "A : U 0", "a : A", "C : Π (y : A) → Id A a y → U 0", "d : C a refl")
        t = x.check("J (λ y p → C y p) d (refl : Id A a a)", "C a refl")
        assert x.k.quote(x.ctx.types, x.k.eval_in(x.ctx, t), x.type_value("C a refl")) == x.term("d")

    def test_add_computes(self, env):
        x = Ctx(env)
        assert x.conv("add (suc (suc zero)) (suc (suc zero))", "suc (suc (suc (suc zero)))", "ℕ")
        assert not x.conv("add (suc (suc zero)) (suc (suc zero))", "suc (suc (suc zero))", "ℕ")


class TestQuote:
    def test_eta_pi(self, env):
        x = Ctx(env, "f : ℕ → ℕ")
        assert x.quote(var(0), "ℕ → ℕ") == c.Lam("x", c.App(c.Var(1), c.Var(0)))

    def test_eta_sigma(self, env):
        x = Ctx(env, "p : ℕ × ℕ")
        assert x.quote(var(0), "ℕ × ℕ") == c.Pair(c.Fst(c.Var(0)), c.Snd(c.Var(0)))

    def test_eta_unit(self, env):
        x = Ctx(env, "t : 𝟙 0")
        assert x.quote(var(0), "𝟙 0") == c.Star()

    def test_unit_eta_switch(self, env):
        x = Ctx(env, "t : 𝟙 0", unit_eta=False)
        assert x.quote(var(0), "𝟙 0") == c.Var(0)
        assert not x.conv("t", "⋆", "𝟙 0")


class TestConversion:
    def test_eta(self, env):
        x = Ctx(env, "f : ℕ → ℕ")
        assert x.conv("λ n → f n", "f", "ℕ → ℕ")

    def test_level_commutativity(self, env):
        x = Ctx(env)
        assert x.conv("U (u ⊔ v)", "U (v ⊔ u)", "U (lsuc u ⊔ lsuc v)")

    def test_distinct_numerals(self, env):
        assert not Ctx(env).conv("zero", "suc zero", "ℕ")

    def test_unit_elements(self, env):
        x = Ctx(env, "s : 𝟙 0", "t : 𝟙 0")
        assert x.conv("s", "t", "𝟙 0")

    def test_equivalence_on_samples(self, env):
        x = Ctx(env, "g : ℕ → ℕ")
        samples = ["add (suc (suc zero))", "λ n → add (suc (suc zero)) n", "λ n → suc (suc n)",
                   "(λ h → h : (ℕ → ℕ) → ℕ → ℕ) (add (suc (suc zero)))", "λ n → add n (suc (suc zero))", "λ n → suc n",
                   "g", "λ n → g n", "(λ h n → h n : (ℕ → ℕ) → ℕ → ℕ) g"]
        ty = x.type_value("ℕ → ℕ")
        vals = [x.check_value(s, ty) for s in samples]
        conv = {(i, j): x.k.conv(x.ctx.types, a, b, ty)
                for (i, a), (j, b) in itertools.product(enumerate(vals), repeat=2)}
        n = len(vals)
        assert all(conv[i, i] for i in range(n))
        assert all(conv[i, j] == conv[j, i] for i in range(n) for j in range(n))
        for i, j, k in itertools.product(range(n), repeat=3):
            if conv[i, j] and conv[j, k]:
                assert conv[i, k]
        assert conv[0, 2] and conv[6, 8] and not conv[0, 4] and not conv[5, 6]


class TestInference:
    def test_universe(self, env):
        ty = Ctx(env).infer("U u")
        assert isinstance(ty, VUniv) and ty.level == lsuc(lvar(u))

    def test_pi_joins_levels(self, env):
        x = Ctx(env, "A : U u", "B : A → U v")
        assert x.infer("Π (a : A) → B a").level == lmax(lvar(u), lvar(v))
        assert x.infer("Π (A : U u) → U v").level == lsuc(lmax(lvar(u), lvar(v)))

    def test_sigma_and_sum(self, env):
        x = Ctx(env, "A : U u", "B : U v")
        assert x.infer("Σ (a : A) , B").level == lmax(lvar(u), lvar(v))
        assert x.infer("A + B").level == lmax(lvar(u), lvar(v))

    def test_truncation_same_universe(self, env):
        assert Ctx(env, "A : U u").infer("∥ A ∥").level == lvar(u)

    def test_identity_type_of_naturals(self, env):
        ty = Ctx(env).infer("Id ℕ zero zero")
        assert isinstance(ty, VUniv) and ty.level == Level.of(0)

    def test_empty_and_unit_indexed(self, env):
        x = Ctx(env)
        assert x.infer("𝟘 v").level == lvar(v)
        assert x.infer("𝟙 (lsuc u)").level == lsuc(lvar(u))

    def test_not_a_function(self, env):
        with pytest.raises(TypeCheckError) as info:
            Ctx(env).infer("zero zero")
        assert info.value.kind == "not-a-function"

    def test_not_a_pair_type(self, env):
        with pytest.raises(TypeCheckError) as info:
            Ctx(env, "n : ℕ").infer("fst n")
        assert info.value.kind == "not-a-pair-type"


class TestChecking:
    def test_polymorphic_identity(self, env):
        Ctx(env).check("λ A x → x", "Π (A : U u) → A → A")

    def test_omega_is_large(self, env):
        with pytest.raises(TypeCheckError) as info:
            Ctx(env).check("Σ (P : U u) , isProp {u} P", "U u")
        e = info.value
        assert e.kind == "level-mismatch"
        assert e.expected_level == lvar(u) and e.actual_level == lsuc(lvar(u))

    def test_refl_of_distinct_terms(self, env):
        with pytest.raises(TypeCheckError) as info:
            Ctx(env).check("refl", "Id ℕ zero (suc zero)")
        assert info.value.kind == "mismatch"

    @given(exprs_strategy())
    def test_girard_guard(self, env, e):
        from generators import build

        l = build(e)
        k = Checker(env)
        with pytest.raises(TypeCheckError) as info:
            k.check(EMPTY, c.Univ(l), VUniv(l))
        assert info.value.kind == "level-mismatch"
        k.check(EMPTY, c.Univ(l), VUniv(lsuc(l)))

    def test_trunc_elim_needs_proposition(self, env):
        x = Ctx(env, "A : U 0")
        with pytest.raises(TypeCheckError) as info:
            x.check("λ t → truncElim (λ p q → refl) (λ _ → zero) t", "∥ A ∥ → ℕ")
        assert info.value.kind == "prop-eliminator-misuse"

    def test_trunc_elim_into_other_universe(self, env):
        Ctx(env, "A : U 0", "P : U 3", "h : isProp {3} P", "f : A → P").check(
            "λ t → truncElim h f t", "∥ A ∥ → P")


class TestDeclarations:
    def test_postulate_is_opaque(self, env):
        assert env["funext"].is_postulate
        x = Ctx(env, "f : ℕ → ℕ", "g : ℕ → ℕ", "H : Π (n : ℕ) → Id ℕ (f n) (g n)")
        ty = "Id (ℕ → ℕ) f g"
        val = x.check_value("funext {0} {0} ℕ (λ _ → ℕ) f g H", x.type_value(ty))
        assert isinstance(val, VNeutral) and isinstance(val.head, HPostulate)
        assert x.conv("funext {0} {0} ℕ (λ _ → ℕ) f g H", "funext {0} {0} ℕ (λ _ → ℕ) f g (λ n → H n)", ty)
        assert not x.conv("funext {0} {0} ℕ (λ _ → ℕ) f f (λ n → refl)", "refl", "Id (ℕ → ℕ) f f")

    def test_wrong_body_rejected(self, env):
        [d] = resolve(parse("bad : ℕ\nbad = U 0"), env.arities())
        before = len(env)
        with pytest.raises(TypeCheckError) as info:
            check_declaration(env, d)
        assert info.value.decl == "bad"
        assert "bad" not in env and len(env) == before

    def test_duplicate(self, env):
        [d] = resolve(parse("add : ℕ\nadd = zero"), {})
        with pytest.raises(TypeCheckError) as info:
            check_declaration(env, d)
        assert info.value.kind == "duplicate-definition"

    def test_infer_level_of(self, env):
        assert infer_level_of(env, "Ω") == lsuc(lvar(u))
        assert infer_level_of(env, "VTrunc") == lsuc(lvar(u))
        assert infer_level_of(env, "idFunctionType") == Level.of(1)

    def test_infer_level_of_non_type(self, env):
        with pytest.raises(TypeCheckError) as info:
            infer_level_of(env, "add")
        assert info.value.kind == "not-a-universe"

    def test_inferred_type_converts_with_declared(self, env):
        k = Checker(env)
        for d in env:
            assert k.conv_type((), inferred_type(env, d.name), k.eval((), d.type))


class TestLevelHoles:
    def test_solved_from_expected_type(self, env):
        e2 = load("idU : Π (A : U 0) → A → A\nidU = (λ A x → x : Π (A : U 0) → A → A)\n"
                  "p : U 2 → U 2\np = isProp {_}", env)
        assert e2["p"].body == c.Global("isProp", (Level.of(2),))

    def test_ambiguous_is_an_error(self, env):
        with pytest.raises(TypeCheckError) as info:
            load("k : {u : Level} → ℕ\nk = zero\nx : ℕ\nx = k {_}", env)
        assert info.value.kind == "cannot-infer"


class TestCorpusKernel:
    def test_types_are_types(self, corpus_env):
        k = Checker(corpus_env)
        for d in corpus_env:
            _, lvl = k.check_type(EMPTY, d.type)
            assert isinstance(lvl, Level)

    def test_two_plus_two(self, corpus_env):
        x = Ctx(corpus_env)
        assert x.conv("add two two", "four", "ℕ")

    def test_unit_eta_needed_for_top(self):
        from uft.corpus import load_corpus
        from uft.errors import UftError

        with pytest.raises(UftError) as info:
            load_corpus(unit_eta=False)
        assert info.value.decl == "⊤Ω"
