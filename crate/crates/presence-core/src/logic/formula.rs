//! Propositional formulas, valuations, and validity over valuations.
//!
//! A valuation plays the role of a possible world for the propositional
//! calculus; a law of inference is valid when every valuation making all
//! premises true makes the conclusion true. Counterexamples are always the
//! lexicographically first failing valuation in variable-declaration order
//! (first occurrence across premises, then conclusion; `false` before
//! `true`), so verdicts are reproducible.

use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// A propositional formula over named variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Formula {
    Var(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Self {
        Formula::Var(name.into())
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// Variables in first-occurrence order (pre-order traversal).
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut Vec<String>) {
        match self {
            Formula::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Formula::Not(a) => a.collect_variables(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_variables(out);
                b.collect_variables(out);
            }
        }
    }

    /// Number of connectives in the tree.
    pub fn connective_count(&self) -> usize {
        match self {
            Formula::Var(_) => 0,
            Formula::Not(a) => 1 + a.connective_count(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.connective_count() + b.connective_count()
            }
        }
    }

    /// Connective depth of the tree (a bare variable has depth 0).
    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) => 0,
            Formula::Not(a) => 1 + a.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Var(_) => 4,
            Formula::Not(_) => 3,
            Formula::And(..) => 2,
            Formula::Or(..) => 1,
            Formula::Implies(..) => 0,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let mine = self.precedence();
        if mine < min {
            f.write_str("(")?;
        }
        match self {
            Formula::Var(v) => f.write_str(v)?,
            Formula::Not(a) => {
                f.write_str("~")?;
                a.fmt_prec(f, 3)?;
            }
            Formula::And(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str(" & ")?;
                b.fmt_prec(f, 3)?;
            }
            Formula::Or(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" | ")?;
                b.fmt_prec(f, 2)?;
            }
            Formula::Implies(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" -> ")?;
                b.fmt_prec(f, 0)?;
            }
        }
        if mine < min {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// A truth assignment to propositional variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Valuation {
    assignments: BTreeMap<String, bool>,
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, variable: impl Into<String>, value: bool) -> Self {
        self.assignments.insert(variable.into(), value);
        self
    }

    pub fn set(&mut self, variable: impl Into<String>, value: bool) {
        self.assignments.insert(variable.into(), value);
    }

    pub fn get(&self, variable: &str) -> Result<bool> {
        self.assignments
            .get(variable)
            .copied()
            .ok_or_else(|| Error::MissingVariable(variable.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &bool)> {
        self.assignments.iter()
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (variable, value) in &self.assignments {
            if !first {
                f.write_str(", ")?;
            }
            write!(f, "{variable}={value}")?;
            first = false;
        }
        Ok(())
    }
}

/// Classical recursive evaluation of a formula under a valuation.
pub fn eval_formula(formula: &Formula, valuation: &Valuation) -> Result<bool> {
    Ok(match formula {
        Formula::Var(v) => valuation.get(v)?,
        Formula::Not(a) => !eval_formula(a, valuation)?,
        Formula::And(a, b) => eval_formula(a, valuation)? && eval_formula(b, valuation)?,
        Formula::Or(a, b) => eval_formula(a, valuation)? || eval_formula(b, valuation)?,
        Formula::Implies(a, b) => !eval_formula(a, valuation)? || eval_formula(b, valuation)?,
    })
}

/// Premises and a conclusion, as one argument.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArgumentForm {
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
}

impl ArgumentForm {
    pub fn new(premises: Vec<Formula>, conclusion: Formula) -> Self {
        Self {
            premises,
            conclusion,
        }
    }

    /// Variables of premises then conclusion, first-occurrence order.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        for p in &self.premises {
            p.collect_variables(&mut out);
        }
        self.conclusion.collect_variables(&mut out);
        out
    }
}

/// Whether an argument holds in every valuation, with the first failing
/// valuation when it does not.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum InferenceVerdict {
    Valid,
    Counterexample(Valuation),
}

impl InferenceVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, InferenceVerdict::Valid)
    }

    pub fn counterexample(&self) -> Option<&Valuation> {
        match self {
            InferenceVerdict::Valid => None,
            InferenceVerdict::Counterexample(v) => Some(v),
        }
    }
}

/// Enumerates valuations in lexicographic order (declaration order of
/// variables, `false` before `true`).
fn valuations(variables: &[String]) -> impl Iterator<Item = Valuation> + '_ {
    let n = variables.len() as u32;
    (0..1u64 << n).map(move |i| {
        let mut v = Valuation::new();
        for (j, variable) in variables.iter().enumerate() {
            let bit = n as usize - 1 - j;
            v.set(variable.clone(), (i >> bit) & 1 == 1);
        }
        v
    })
}

/// True iff all premises and the conclusion hold in the given world.
pub fn check_particular_inference(
    premises: &[Formula],
    conclusion: &Formula,
    world: &Valuation,
) -> Result<bool> {
    for premise in premises {
        if !eval_formula(premise, world)? {
            return Ok(false);
        }
    }
    eval_formula(conclusion, world)
}

/// Validity by quantifying the world over all valuations: valid iff every
/// valuation satisfying all premises satisfies the conclusion.
pub fn check_law_of_inference(premises: &[Formula], conclusion: &Formula) -> InferenceVerdict {
    let form = ArgumentForm::new(premises.to_vec(), conclusion.clone());
    let variables = form.variables();
    for valuation in valuations(&variables) {
        let premises_hold = premises
            .iter()
            .all(|p| eval_formula(p, &valuation).expect("valuation is total"));
        if premises_hold && !eval_formula(conclusion, &valuation).expect("valuation is total") {
            return InferenceVerdict::Counterexample(valuation);
        }
    }
    InferenceVerdict::Valid
}

/// Replaces every variable by its image under `map`; unmapped variables
/// stay themselves.
pub fn substitute(formula: &Formula, map: &BTreeMap<String, Formula>) -> Formula {
    match formula {
        Formula::Var(v) => map.get(v).cloned().unwrap_or_else(|| formula.clone()),
        Formula::Not(a) => Formula::not(substitute(a, map)),
        Formula::And(a, b) => Formula::and(substitute(a, map), substitute(b, map)),
        Formula::Or(a, b) => Formula::or(substitute(a, map), substitute(b, map)),
        Formula::Implies(a, b) => Formula::implies(substitute(a, map), substitute(b, map)),
    }
}

/// Verdict of a generalized law: the schema quantified over valuations,
/// plus each supplied substitution instance re-checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneralizedVerdict {
    pub schema: InferenceVerdict,
    pub instances: Vec<InferenceVerdict>,
}

impl GeneralizedVerdict {
    pub fn is_valid(&self) -> bool {
        self.schema.is_valid() && self.instances.iter().all(InferenceVerdict::is_valid)
    }
}

/// Decides a schema over propositional variables and validates the supplied
/// substitution instances. Propositional variables already range over all
/// substitutions, so the schema decision procedure is the valuation one.
pub fn check_generalized_law(
    premises: &[Formula],
    conclusion: &Formula,
    substitutions: &[BTreeMap<String, Formula>],
) -> GeneralizedVerdict {
    let schema = check_law_of_inference(premises, conclusion);
    let instances = substitutions
        .iter()
        .map(|map| {
            let premises: Vec<Formula> = premises.iter().map(|p| substitute(p, map)).collect();
            let conclusion = substitute(conclusion, map);
            check_law_of_inference(&premises, &conclusion)
        })
        .collect();
    GeneralizedVerdict { schema, instances }
}

/// Purely syntactic matching of a concrete argument against a schema:
/// returns the map from schema variables to concrete sub-formulas that
/// makes the schema equal the argument, premise by premise.
pub fn match_schema(concrete: &ArgumentForm, schema: &ArgumentForm) -> Option<BTreeMap<String, Formula>> {
    if concrete.premises.len() != schema.premises.len() {
        return None;
    }
    let mut bindings = BTreeMap::new();
    for (s, c) in schema.premises.iter().zip(&concrete.premises) {
        if !match_into(s, c, &mut bindings) {
            return None;
        }
    }
    if !match_into(&schema.conclusion, &concrete.conclusion, &mut bindings) {
        return None;
    }
    Some(bindings)
}

fn match_into(schema: &Formula, concrete: &Formula, bindings: &mut BTreeMap<String, Formula>) -> bool {
    match (schema, concrete) {
        (Formula::Var(v), _) => match bindings.get(v) {
            Some(bound) => bound == concrete,
            None => {
                bindings.insert(v.clone(), concrete.clone());
                true
            }
        },
        (Formula::Not(a), Formula::Not(x)) => match_into(a, x, bindings),
        (Formula::And(a, b), Formula::And(x, y))
        | (Formula::Or(a, b), Formula::Or(x, y))
        | (Formula::Implies(a, b), Formula::Implies(x, y)) => {
            match_into(a, x, bindings) && match_into(b, y, bindings)
        }
        _ => false,
    }
}

/// Parses `~`/`!` (negation), `&`, `|`, `->` (right-associative), and
/// parentheses, with the usual precedence `~` > `&` > `|` > `->`.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let formula = parser.implication()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::FormulaSyntax(format!(
            "unexpected trailing input at token {}",
            parser.pos + 1
        )));
    }
    Ok(formula)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Ident(String),
    Not,
    And,
    Or,
    Implies,
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' => {
                chars.next();
            }
            '~' | '!' => {
                chars.next();
                tokens.push(Token::Not);
            }
            '&' => {
                chars.next();
                tokens.push(Token::And);
            }
            '|' => {
                chars.next();
                tokens.push(Token::Or);
            }
            '(' => {
                chars.next();
                tokens.push(Token::Open);
            }
            ')' => {
                chars.next();
                tokens.push(Token::Close);
            }
            '-' => {
                chars.next();
                if chars.next() != Some('>') {
                    return Err(Error::FormulaSyntax("expected `->`".into()));
                }
                tokens.push(Token::Implies);
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut ident = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        ident.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push(Token::Ident(ident));
            }
            other => {
                return Err(Error::FormulaSyntax(format!("unexpected character `{other}`")));
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn implication(&mut self) -> Result<Formula> {
        let left = self.disjunction()?;
        if self.peek() == Some(&Token::Implies) {
            self.pos += 1;
            let right = self.implication()?;
            Ok(Formula::implies(left, right))
        } else {
            Ok(left)
        }
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut left = self.conjunction()?;
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            let right = self.conjunction()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut left = self.unary()?;
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Token::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Token::Open) => {
                self.pos += 1;
                let inner = self.implication()?;
                if self.peek() != Some(&Token::Close) {
                    return Err(Error::FormulaSyntax("missing closing parenthesis".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(Token::Ident(name)) => {
                let formula = Formula::var(name.clone());
                self.pos += 1;
                Ok(formula)
            }
            _ => Err(Error::FormulaSyntax("expected a formula".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(name: &str) -> Formula {
        Formula::var(name)
    }

    #[test]
    fn bare_variable_evaluates_to_its_assignment() {
        let valuation = Valuation::new().with("A", true);
        assert!(eval_formula(&v("A"), &valuation).unwrap());
    }

    #[test]
    fn contradiction_is_false_under_every_valuation() {
        let f = Formula::and(v("A"), Formula::not(v("A")));
        for value in [false, true] {
            let valuation = Valuation::new().with("A", value);
            assert!(!eval_formula(&f, &valuation).unwrap());
        }
    }

    #[test]
    fn missing_variable_is_an_error() {
        let err = eval_formula(&v("A"), &Valuation::new()).unwrap_err();
        assert_eq!(err, Error::MissingVariable("A".into()));
    }

    /// An independent evaluator: truth tables as bitmasks, one bit per
    /// valuation, built with bitwise operators instead of recursion over
    /// booleans.
    fn table_mask(f: &Formula, variables: &[String]) -> u32 {
        let n = variables.len();
        let full = if n == 32 { u32::MAX } else { (1u32 << (1 << n)) - 1 };
        match f {
            Formula::Var(name) => {
                let j = variables.iter().position(|x| x == name).unwrap();
                let mut mask = 0u32;
                for i in 0..(1 << n) {
                    if (i >> (n - 1 - j)) & 1 == 1 {
                        mask |= 1 << i;
                    }
                }
                mask
            }
            Formula::Not(a) => full & !table_mask(a, variables),
            Formula::And(a, b) => table_mask(a, variables) & table_mask(b, variables),
            Formula::Or(a, b) => table_mask(a, variables) | table_mask(b, variables),
            Formula::Implies(a, b) => {
                (full & !table_mask(a, variables)) | table_mask(b, variables)
            }
        }
    }

    fn random_formula(rng: &mut ChaCha8Rng, depth: usize) -> Formula {
        let names = ["A", "B", "C"];
        if depth == 0 || rng.gen_bool(0.3) {
            return v(names[rng.gen_range(0..names.len())]);
        }
        match rng.gen_range(0..4) {
            0 => Formula::not(random_formula(rng, depth - 1)),
            1 => Formula::and(random_formula(rng, depth - 1), random_formula(rng, depth - 1)),
            2 => Formula::or(random_formula(rng, depth - 1), random_formula(rng, depth - 1)),
            _ => Formula::implies(random_formula(rng, depth - 1), random_formula(rng, depth - 1)),
        }
    }

    #[test]
    fn recursive_and_bitmask_evaluators_agree_on_random_formulas() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let variables: Vec<String> = ["A", "B", "C"].map(String::from).to_vec();
        for _ in 0..500 {
            let f = random_formula(&mut rng, 4);
            let mask = table_mask(&f, &variables);
            for (i, valuation) in valuations(&variables).enumerate() {
                let expected = (mask >> i) & 1 == 1;
                assert_eq!(eval_formula(&f, &valuation).unwrap(), expected, "{f} at {valuation}");
            }
        }
    }

    #[test]
    fn modus_ponens_is_valid_by_enumeration() {
        // oracle: all four valuations, checked by hand below
        let premises = vec![Formula::implies(v("A"), v("B")), v("A")];
        let verdict = check_law_of_inference(&premises, &v("B"));
        assert!(verdict.is_valid());
        for (a, b) in [(false, false), (false, true), (true, false), (true, true)] {
            let premises_hold = (!a || b) && a;
            if premises_hold {
                assert!(b, "oracle: conclusion must hold at A={a}, B={b}");
            }
        }
    }

    #[test]
    fn affirming_the_consequent_yields_the_documented_counterexample() {
        let premises = vec![Formula::implies(v("A"), v("B")), v("B")];
        let verdict = check_law_of_inference(&premises, &v("A"));
        let expected = Valuation::new().with("A", false).with("B", true);
        assert_eq!(verdict.counterexample(), Some(&expected));
        // the counterexample satisfies the premises and falsifies the
        // conclusion, re-verified by direct evaluation
        let w = verdict.counterexample().unwrap();
        assert!(premises.iter().all(|p| eval_formula(p, w).unwrap()));
        assert!(!eval_formula(&v("A"), w).unwrap());
    }

    #[test]
    fn identity_argument_is_valid() {
        assert!(check_law_of_inference(&[v("A")], &v("A")).is_valid());
    }

    #[test]
    fn counterexamples_are_lexicographically_first() {
        // every valuation except (true, true) falsifies A & B; the first
        // in declaration order is A=false, B=false
        let verdict = check_law_of_inference(&[], &Formula::and(v("A"), v("B")));
        let expected = Valuation::new().with("A", false).with("B", false);
        assert_eq!(verdict.counterexample(), Some(&expected));
    }

    #[test]
    fn monotonicity_adding_premises_preserves_validity() {
        let base = vec![Formula::implies(v("A"), v("B")), v("A")];
        assert!(check_law_of_inference(&base, &v("B")).is_valid());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let mut extended = base.clone();
            extended.push(random_formula(&mut rng, 3));
            assert!(check_law_of_inference(&extended, &v("B")).is_valid());
        }
    }

    #[test]
    fn particular_inference_composes_evaluations() {
        let premises = vec![Formula::implies(v("rain"), v("flood")), v("rain")];
        let world = Valuation::new().with("rain", true).with("flood", true);
        assert!(check_particular_inference(&premises, &v("flood"), &world).unwrap());

        let dry = Valuation::new().with("rain", false).with("flood", false);
        assert!(!check_particular_inference(&premises, &v("flood"), &dry).unwrap());

        // agreement with direct composition of eval_formula
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let ps = vec![random_formula(&mut rng, 3), random_formula(&mut rng, 3)];
            let c = random_formula(&mut rng, 3);
            let w = Valuation::new()
                .with("A", rng.gen_bool(0.5))
                .with("B", rng.gen_bool(0.5))
                .with("C", rng.gen_bool(0.5));
            let oracle = ps.iter().chain([&c]).all(|f| eval_formula(f, &w).unwrap());
            assert_eq!(check_particular_inference(&ps, &c, &w).unwrap(), oracle);
        }
    }

    #[test]
    fn generalized_law_revalidates_substitution_instances() {
        let premises = vec![Formula::implies(v("p"), v("q")), v("p")];
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let substitutions: Vec<BTreeMap<String, Formula>> = (0..50)
            .map(|_| {
                let mut map = BTreeMap::new();
                map.insert("p".to_string(), random_formula(&mut rng, 4));
                map.insert("q".to_string(), random_formula(&mut rng, 4));
                map
            })
            .collect();
        let verdict = check_generalized_law(&premises, &v("q"), &substitutions);
        assert!(verdict.is_valid());
        assert_eq!(verdict.instances.len(), 50);
    }

    #[test]
    fn denying_the_antecedent_fails_as_a_schema() {
        let premises = vec![Formula::implies(v("p"), v("q")), Formula::not(v("p"))];
        let verdict = check_generalized_law(&premises, &Formula::not(v("q")), &[]);
        assert!(!verdict.is_valid());
        assert!(verdict.schema.counterexample().is_some());
    }

    #[test]
    fn schema_matching_recovers_the_substitution() {
        // « if it rains the ground is wet; it rains; so the ground is wet »
        let concrete = ArgumentForm::new(
            vec![Formula::implies(v("it_rains"), v("ground_wet")), v("it_rains")],
            v("ground_wet"),
        );
        let schema = ArgumentForm::new(vec![Formula::implies(v("p"), v("q")), v("p")], v("q"));
        let bindings = match_schema(&concrete, &schema).unwrap();
        assert_eq!(bindings["p"], v("it_rains"));
        assert_eq!(bindings["q"], v("ground_wet"));
        // substituting back reproduces the concrete argument exactly
        let rebuilt: Vec<Formula> = schema.premises.iter().map(|p| substitute(p, &bindings)).collect();
        assert_eq!(rebuilt, concrete.premises);
        assert_eq!(substitute(&schema.conclusion, &bindings), concrete.conclusion);
    }

    #[test]
    fn schema_matches_itself_with_identity_bindings() {
        let schema = ArgumentForm::new(vec![Formula::implies(v("p"), v("q")), v("p")], v("q"));
        let bindings = match_schema(&schema, &schema).unwrap();
        assert_eq!(bindings["p"], v("p"));
        assert_eq!(bindings["q"], v("q"));
    }

    #[test]
    fn mismatched_conclusion_has_no_match() {
        let concrete = ArgumentForm::new(
            vec![Formula::implies(v("a"), v("b")), v("a")],
            Formula::not(v("b")),
        );
        let schema = ArgumentForm::new(vec![Formula::implies(v("p"), v("q")), v("p")], v("q"));
        assert_eq!(match_schema(&concrete, &schema), None);
    }

    #[test]
    fn inconsistent_bindings_are_rejected() {
        // p would have to stand for both a and b
        let concrete = ArgumentForm::new(vec![Formula::and(v("a"), v("b"))], v("a"));
        let schema = ArgumentForm::new(vec![Formula::and(v("p"), v("p"))], v("p"));
        assert_eq!(match_schema(&concrete, &schema), None);
    }

    #[test]
    fn parser_respects_precedence_and_associativity() {
        let parsed = parse_formula("~A & B | C -> D -> E").unwrap();
        let expected = Formula::implies(
            Formula::or(Formula::and(Formula::not(v("A")), v("B")), v("C")),
            Formula::implies(v("D"), v("E")),
        );
        assert_eq!(parsed, expected);
        // round trip through Display
        assert_eq!(parse_formula(&parsed.to_string()).unwrap(), parsed);
    }

    #[test]
    fn parser_handles_parentheses() {
        let parsed = parse_formula("A & (B | C)").unwrap();
        assert_eq!(parsed, Formula::and(v("A"), Formula::or(v("B"), v("C"))));
    }

    #[test]
    fn parser_rejects_malformed_input() {
        for bad in ["", "A &", "(A", "A -> ", "A @ B", "A - B"] {
            assert!(matches!(parse_formula(bad).unwrap_err(), Error::FormulaSyntax(_)), "{bad}");
        }
    }

    #[test]
    fn display_round_trips_random_formulas() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let f = random_formula(&mut rng, 5);
            assert_eq!(parse_formula(&f.to_string()).unwrap(), f, "{f}");
        }
    }
}
