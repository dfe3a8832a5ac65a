//! The scenario file format: a plain-text description of a universe and a
//! representational system, one declaration per line.
//!
//! Sections appear in a fixed order — `SCHEMA`, `WORLD`, `WINDOW`, `PATCH`,
//! `UNIT`, `SEM`, `LINK`, `SITUATION`, `OBJECT`, `LAW`, `QUERY` — and a
//! section may repeat (several worlds, several patches) but may not come
//! back after a later section has started. `SCHEMA`, `WORLD`, and `PATCH`
//! open `END`-terminated blocks whose body lines describe cells; everything
//! else is a single line. `#` starts a comment anywhere.
//!
//! ```text
//! SCHEMA resolution=8
//!   attr color red blue white
//! END
//! WORLD jane 2 2
//!   fill color=white
//!   0,0 color=red
//! END
//! WINDOW 2 2
//! PATCH page 2 2 anchor=jane:0,0
//!   0,0 color=red
//!   1,0 token=NOTE
//! END
//! UNIT NOTE name
//! SEM NOTE code page
//! QUERY mp premise p -> q
//! QUERY mp premise p
//! QUERY mp conclude q
//! ```

use presence_core::geom::Offset;
use presence_core::logic::{parse_formula, ArgumentForm, ContentDescriptor, Formula};
use presence_core::presence::{Anchor, Patch, WindowSpec};
use presence_core::universe::{AttributeSchema, Universe, World};
use presence_core::web::{Proposition, RepresentationalSystem, Rule, RuleBody, UnitId, UnitKind};
use std::collections::BTreeMap;
use std::fmt;

/// A parse failure, pointing at the offending line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub message: String,
}

impl Diagnostic {
    fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for Diagnostic {}

/// A fully assembled scenario: the engine objects plus the named patches
/// and propositional queries the commands operate on.
#[derive(Debug)]
pub struct Scenario {
    pub universe: Option<Universe>,
    pub system: RepresentationalSystem,
    pub patches: BTreeMap<String, Patch>,
    pub queries: BTreeMap<String, ArgumentForm>,
}

type Parse<T> = Result<T, Diagnostic>;

const SECTIONS: [&str; 11] = [
    "SCHEMA", "WORLD", "WINDOW", "PATCH", "UNIT", "SEM", "LINK", "SITUATION", "OBJECT", "LAW",
    "QUERY",
];

/// A numbered, comment-stripped, non-blank line.
struct Line<'a> {
    number: usize,
    words: Vec<&'a str>,
    text: &'a str,
}

fn meaningful_lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let stripped = raw.split('#').next().unwrap_or("").trim();
            if stripped.is_empty() {
                return None;
            }
            Some(Line {
                number: i + 1,
                words: stripped.split_whitespace().collect(),
                text: stripped,
            })
        })
        .collect()
}

fn parse_number<T: std::str::FromStr>(line: usize, what: &str, word: &str) -> Parse<T> {
    word.parse()
        .map_err(|_| Diagnostic::new(line, format!("{what}: expected a number, got `{word}`")))
}

/// Splits `x,y` into a coordinate pair.
fn parse_pair(line: usize, what: &str, word: &str) -> Parse<(i32, i32)> {
    let (x, y) = word
        .split_once(',')
        .ok_or_else(|| Diagnostic::new(line, format!("{what}: expected `X,Y`, got `{word}`")))?;
    Ok((
        parse_number(line, what, x)?,
        parse_number(line, what, y)?,
    ))
}

fn parse_assignment<'a>(line: usize, word: &'a str) -> Parse<(&'a str, &'a str)> {
    word.split_once('=')
        .ok_or_else(|| Diagnostic::new(line, format!("expected `key=value`, got `{word}`")))
}

/// One cell-description line inside a `WORLD` or `PATCH` block.
enum CellLine<'a> {
    Fill { attribute: &'a str, value: &'a str },
    Assign { x: i32, y: i32, attribute: &'a str, value: &'a str },
    Token { x: i32, y: i32, unit: &'a str },
}

fn parse_cell_line<'a>(line: &Line<'a>, allow_tokens: bool) -> Parse<CellLine<'a>> {
    let n = line.number;
    if line.words[0] == "fill" {
        let [_, assignment] = line.words[..] else {
            return Err(Diagnostic::new(n, "fill takes exactly one `attr=value`"));
        };
        let (attribute, value) = parse_assignment(n, assignment)?;
        return Ok(CellLine::Fill { attribute, value });
    }
    let [coords, assignment] = line.words[..] else {
        return Err(Diagnostic::new(n, format!("expected `X,Y attr=value`, got `{}`", line.text)));
    };
    let (x, y) = parse_pair(n, "cell", coords)?;
    let (key, value) = parse_assignment(n, assignment)?;
    if key == "token" {
        if !allow_tokens {
            return Err(Diagnostic::new(n, "tokens belong in patches, not worlds"));
        }
        return Ok(CellLine::Token { x, y, unit: value });
    }
    Ok(CellLine::Assign { x, y, attribute: key, value })
}

/// Raw material gathered in the first pass, before ids are resolved.
#[derive(Default)]
struct Collected<'a> {
    schema: Option<(usize, usize, Vec<(&'a str, Vec<&'a str>)>)>,
    worlds: Vec<(usize, &'a str, u32, u32, Vec<Line<'a>>)>,
    window: Option<(usize, u32, u32)>,
    patches: Vec<(usize, &'a str, u32, u32, Option<&'a str>, Vec<Line<'a>>)>,
    units: Vec<(usize, &'a str, &'a str)>,
    semantics: Vec<Line<'a>>,
    links: Vec<Line<'a>>,
    situations: Vec<Line<'a>>,
    objects: Vec<Line<'a>>,
    laws: Vec<Line<'a>>,
    queries: Vec<Line<'a>>,
}

/// Parses a scenario, or fails with a line-numbered diagnostic. All ids a
/// declaration refers to must exist by the end of the file; a token naming
/// a unit that is never declared is reported with the token's line.
pub fn parse_scenario(text: &str) -> Parse<Scenario> {
    let lines = meaningful_lines(text);
    let collected = collect(lines)?;
    build(collected)
}

fn collect(lines: Vec<Line<'_>>) -> Parse<Collected<'_>> {
    let mut out = Collected::default();
    let mut highest_section = 0usize;
    let mut lines = lines.into_iter();
    while let Some(line) = lines.next() {
        let n = line.number;
        let section = line.words[0];
        let Some(order) = SECTIONS.iter().position(|s| *s == section) else {
            return Err(Diagnostic::new(n, format!("unknown section `{section}`")));
        };
        if order < highest_section {
            return Err(Diagnostic::new(
                n,
                format!("section {section} cannot follow {}", SECTIONS[highest_section]),
            ));
        }
        highest_section = order;
        match section {
            "SCHEMA" => {
                if out.schema.is_some() {
                    return Err(Diagnostic::new(n, "SCHEMA declared twice"));
                }
                let [_, resolution] = line.words[..] else {
                    return Err(Diagnostic::new(n, "usage: SCHEMA resolution=N"));
                };
                let (key, value) = parse_assignment(n, resolution)?;
                if key != "resolution" {
                    return Err(Diagnostic::new(n, "usage: SCHEMA resolution=N"));
                }
                let resolution = parse_number(n, "resolution", value)?;
                let mut attributes = Vec::new();
                for body in block_body(&mut lines, n, "SCHEMA")? {
                    let bn = body.number;
                    match body.words[..] {
                        ["attr", name, ref values @ ..] if !values.is_empty() => {
                            attributes.push((name, values.to_vec()));
                        }
                        _ => {
                            return Err(Diagnostic::new(
                                bn,
                                "schema lines are `attr NAME VALUE...`",
                            ))
                        }
                    }
                }
                out.schema = Some((n, resolution, attributes));
            }
            "WORLD" => {
                let [_, id, w, h] = line.words[..] else {
                    return Err(Diagnostic::new(n, "usage: WORLD id WIDTH HEIGHT"));
                };
                let w = parse_number(n, "world width", w)?;
                let h = parse_number(n, "world height", h)?;
                let body = block_body(&mut lines, n, "WORLD")?;
                out.worlds.push((n, id, w, h, body));
            }
            "WINDOW" => {
                if out.window.is_some() {
                    return Err(Diagnostic::new(n, "WINDOW declared twice"));
                }
                let [_, w, h] = line.words[..] else {
                    return Err(Diagnostic::new(n, "usage: WINDOW WIDTH HEIGHT"));
                };
                out.window = Some((
                    n,
                    parse_number(n, "window width", w)?,
                    parse_number(n, "window height", h)?,
                ));
            }
            "PATCH" => {
                let (id, w, h, anchor) = match line.words[..] {
                    [_, id, w, h] => (id, w, h, None),
                    [_, id, w, h, anchor] => (id, w, h, Some(anchor)),
                    _ => {
                        return Err(Diagnostic::new(
                            n,
                            "usage: PATCH id WIDTH HEIGHT [anchor=world:X,Y]",
                        ))
                    }
                };
                let w = parse_number(n, "patch width", w)?;
                let h = parse_number(n, "patch height", h)?;
                let body = block_body(&mut lines, n, "PATCH")?;
                out.patches.push((n, id, w, h, anchor, body));
            }
            "UNIT" => {
                let [_, id, kind] = line.words[..] else {
                    return Err(Diagnostic::new(n, "usage: UNIT id KIND"));
                };
                out.units.push((n, id, kind));
            }
            "SEM" => out.semantics.push(line),
            "LINK" => out.links.push(line),
            "SITUATION" => out.situations.push(line),
            "OBJECT" => out.objects.push(line),
            "LAW" => out.laws.push(line),
            "QUERY" => out.queries.push(line),
            _ => unreachable!("every section is handled"),
        }
    }
    Ok(out)
}

/// Consumes body lines up to the matching `END`.
fn block_body<'a>(
    lines: &mut impl Iterator<Item = Line<'a>>,
    opened_at: usize,
    section: &str,
) -> Parse<Vec<Line<'a>>> {
    let mut body = Vec::new();
    for line in lines.by_ref() {
        if line.words[0] == "END" {
            return Ok(body);
        }
        body.push(line);
    }
    Err(Diagnostic::new(
        opened_at,
        format!("{section} block is never closed with END"),
    ))
}

fn build(collected: Collected<'_>) -> Parse<Scenario> {
    let Some((schema_line, resolution, attributes)) = collected.schema else {
        return Err(Diagnostic::new(1, "missing SCHEMA section"));
    };
    let schema = AttributeSchema::new(attributes, resolution)
        .map_err(|e| Diagnostic::new(schema_line, e.to_string()))?;

    let mut worlds = Vec::new();
    for (n, id, w, h, body) in collected.worlds {
        let mut world = World::new(id, w, h);
        for line in body {
            match parse_cell_line(&line, false)? {
                CellLine::Fill { attribute, value } => {
                    for y in 0..h as i32 {
                        for x in 0..w as i32 {
                            world.set(x, y, attribute, value);
                        }
                    }
                }
                CellLine::Assign { x, y, attribute, value } => {
                    world.set(x, y, attribute, value);
                }
                CellLine::Token { .. } => unreachable!("tokens rejected in worlds"),
            }
        }
        worlds.push((n, world));
    }
    let universe = if worlds.is_empty() {
        None
    } else {
        let first_line = worlds[0].0;
        Some(
            Universe::build(schema.clone(), worlds.into_iter().map(|(_, w)| w).collect())
                .map_err(|e| Diagnostic::new(first_line, e.to_string()))?,
        )
    };

    let Some((window_line, w, h)) = collected.window else {
        return Err(Diagnostic::new(1, "missing WINDOW declaration"));
    };
    let window = WindowSpec::new(w, h, schema.clone())
        .map_err(|e| Diagnostic::new(window_line, e.to_string()))?;
    let mut system = RepresentationalSystem::new(window);
    if let Some(universe) = &universe {
        system
            .bind_universe(universe.clone())
            .map_err(|e| Diagnostic::new(window_line, e.to_string()))?;
    }

    for (n, id, kind) in &collected.units {
        let kind = match *kind {
            "name" => UnitKind::Name,
            "predicate" => UnitKind::Predicate,
            "proposition" => UnitKind::PropositionSymbol,
            "variable" => UnitKind::Variable,
            "law-label" => UnitKind::LawLabel,
            "link-label" => UnitKind::LinkLabel,
            other => {
                return Err(Diagnostic::new(
                    *n,
                    format!("unknown unit kind `{other}` (name, predicate, proposition, variable, law-label, link-label)"),
                ))
            }
        };
        system
            .add_unit(*id, kind)
            .map_err(|e| Diagnostic::new(*n, e.to_string()))?;
    }

    // patches may use tokens of units declared further down, so their cells
    // resolve only now that every unit is known
    let mut patches: BTreeMap<String, Patch> = BTreeMap::new();
    for (n, id, w, h, anchor, body) in collected.patches {
        if patches.contains_key(id) {
            return Err(Diagnostic::new(n, format!("patch `{id}` declared twice")));
        }
        let mut patch = Patch::new(w, h);
        if let Some(anchor) = anchor {
            let (key, place) = parse_assignment(n, anchor)?;
            let (world, at) = place
                .split_once(':')
                .ok_or_else(|| Diagnostic::new(n, "anchor is `anchor=world:X,Y`"))?;
            if key != "anchor" {
                return Err(Diagnostic::new(n, "anchor is `anchor=world:X,Y`"));
            }
            let (x, y) = parse_pair(n, "anchor", at)?;
            patch = patch.with_anchor(Anchor::new(world, x, y));
        }
        for line in body {
            let bn = line.number;
            match parse_cell_line(&line, true)? {
                CellLine::Fill { attribute, value } => {
                    for y in 0..h as i32 {
                        for x in 0..w as i32 {
                            patch.set(x, y, attribute, value);
                        }
                    }
                }
                CellLine::Assign { x, y, attribute, value } => {
                    if x < 0 || y < 0 || x >= w as i32 || y >= h as i32 {
                        return Err(Diagnostic::new(bn, format!("cell {x},{y} is outside the patch")));
                    }
                    patch.set(x, y, attribute, value);
                }
                CellLine::Token { x, y, unit } => {
                    if system.unit(&unit.into()).is_err() {
                        return Err(Diagnostic::new(bn, format!("token names unknown unit `{unit}`")));
                    }
                    if x < 0 || y < 0 || x >= w as i32 || y >= h as i32 {
                        return Err(Diagnostic::new(bn, format!("cell {x},{y} is outside the patch")));
                    }
                    patch.set_token(x, y, unit);
                }
            }
        }
        patch
            .check_schema(&schema)
            .map_err(|e| Diagnostic::new(n, e.to_string()))?;
        patches.insert(id.to_string(), patch);
    }

    for line in &collected.semantics {
        let n = line.number;
        match line.words[..] {
            [_, unit, "code", patch_id] => {
                let patch = patches
                    .get(patch_id)
                    .ok_or_else(|| Diagnostic::new(n, format!("unknown patch `{patch_id}`")))?;
                let code = system
                    .store_eaf(patch.clone())
                    .map_err(|e| Diagnostic::new(n, e.to_string()))?;
                system
                    .add_semantic_image(&unit.into(), code)
                    .map_err(|e| Diagnostic::new(n, e.to_string()))?;
            }
            [_, unit, "rule", rule_id, "circle", size, attribute, on, off] => {
                let body = RuleBody::Circle {
                    size: parse_number(n, "circle size", size)?,
                    attribute: attribute.into(),
                    on: on.into(),
                    off: off.into(),
                };
                system
                    .add_semantic_rule(&unit.into(), Rule::new(rule_id, body))
                    .map_err(|e| Diagnostic::new(n, e.to_string()))?;
            }
            [_, unit, "rule", rule_id, "fill", ref assignments @ ..] if !assignments.is_empty() => {
                let mut content = BTreeMap::new();
                for word in assignments {
                    let (attribute, value) = parse_assignment(n, word)?;
                    content.insert(attribute.to_string(), value.to_string());
                }
                system
                    .add_semantic_rule(&unit.into(), Rule::new(rule_id, RuleBody::Fill { content }))
                    .map_err(|e| Diagnostic::new(n, e.to_string()))?;
            }
            _ => {
                return Err(Diagnostic::new(
                    n,
                    "usage: SEM unit code PATCH | SEM unit rule id circle SIZE ATTR ON OFF | SEM unit rule id fill attr=value...",
                ))
            }
        }
    }

    for line in &collected.situations {
        let n = line.number;
        let [_, id, patch_id, place] = line.words[..] else {
            return Err(Diagnostic::new(n, "usage: SITUATION id PATCH world:X,Y"));
        };
        let patch = patches
            .get(patch_id)
            .ok_or_else(|| Diagnostic::new(n, format!("unknown patch `{patch_id}`")))?;
        let (world, at) = place
            .split_once(':')
            .ok_or_else(|| Diagnostic::new(n, "situation anchor is `world:X,Y`"))?;
        let (x, y) = parse_pair(n, "situation anchor", at)?;
        system
            .add_situation(id, patch, Anchor::new(world, x, y))
            .map_err(|e| Diagnostic::new(n, e.to_string()))?;
    }

    for line in &collected.links {
        let n = line.number;
        let [_, id, a, b, grounding] = line.words[..] else {
            return Err(Diagnostic::new(n, "usage: LINK id A B align=DX,DY | LINK id A B artificial"));
        };
        let alignment = if grounding == "artificial" {
            None
        } else {
            let (key, at) = parse_assignment(n, grounding)?;
            if key != "align" {
                return Err(Diagnostic::new(n, "grounding is `align=DX,DY` or `artificial`"));
            }
            let (dx, dy) = parse_pair(n, "alignment", at)?;
            Some(Offset::new(dx, dy))
        };
        system
            .add_link(id, &a.into(), &b.into(), alignment)
            .map_err(|e| Diagnostic::new(n, e.to_string()))?;
    }

    for line in &collected.objects {
        let n = line.number;
        let [_, unit, ref situations @ ..] = line.words[..] else {
            return Err(Diagnostic::new(n, "usage: OBJECT unit SITUATION..."));
        };
        if situations.is_empty() {
            return Err(Diagnostic::new(n, "an object needs at least one situation"));
        }
        system
            .build_object(&unit.into(), situations.iter().map(|s| (*s).into()).collect())
            .map_err(|e| Diagnostic::new(n, e.to_string()))?;
    }

    for line in &collected.laws {
        build_law(line, &mut system, &patches)?;
    }

    let queries = build_queries(&collected.queries)?;

    system
        .validate()
        .map_err(|e| Diagnostic::new(1, format!("scenario is inconsistent: {e}")))?;
    Ok(Scenario {
        universe,
        system,
        patches,
        queries,
    })
}

/// `LAW label term=u domain=u1,u2,... ante=DESC cons=DESC`; a descriptor is
/// `prop:+SUBJ:PRED`, `prop:-SUBJ:PRED`, `object:UNIT`, or `fragment:PATCH`.
fn build_law(
    line: &Line<'_>,
    system: &mut RepresentationalSystem,
    patches: &BTreeMap<String, Patch>,
) -> Parse<()> {
    let n = line.number;
    let [_, label, ref fields @ ..] = line.words[..] else {
        return Err(Diagnostic::new(n, "usage: LAW label term=U domain=U,... ante=DESC cons=DESC"));
    };
    let mut term = None;
    let mut domain = None;
    let mut ante = None;
    let mut cons = None;
    for field in fields {
        let (key, value) = parse_assignment(n, field)?;
        match key {
            "term" => term = Some(value),
            "domain" => domain = Some(value),
            "ante" => ante = Some(value),
            "cons" => cons = Some(value),
            other => return Err(Diagnostic::new(n, format!("unknown law field `{other}`"))),
        }
    }
    let (Some(term), Some(domain), Some(ante), Some(cons)) = (term, domain, ante, cons) else {
        return Err(Diagnostic::new(n, "a law needs term=, domain=, ante=, and cons="));
    };
    let antecedent = parse_descriptor(n, ante, patches)?;
    let consequent = parse_descriptor(n, cons, patches)?;
    let imp = presence_core::logic::implicate(system, antecedent, consequent, None)
        .map_err(|e| Diagnostic::new(n, e.to_string()))?;
    let domain: std::collections::BTreeSet<UnitId> =
        domain.split(',').map(UnitId::from).collect();
    let law = presence_core::logic::generalize(system, &imp, &term.into(), domain)
        .map_err(|e| Diagnostic::new(n, e.to_string()))?;
    system
        .add_law(&label.into(), law)
        .map_err(|e| Diagnostic::new(n, e.to_string()))?;
    Ok(())
}

fn parse_descriptor(
    line: usize,
    text: &str,
    patches: &BTreeMap<String, Patch>,
) -> Parse<ContentDescriptor> {
    let (kind, rest) = text
        .split_once(':')
        .ok_or_else(|| Diagnostic::new(line, format!("descriptor `{text}` needs a kind prefix")))?;
    match kind {
        "prop" => {
            let (sign, body) = rest.split_at(1);
            let (subject, predicate) = body
                .split_once(':')
                .ok_or_else(|| Diagnostic::new(line, "proposition is `prop:+SUBJ:PRED` or `prop:-SUBJ:PRED`"))?;
            let proposition = match sign {
                "+" => Proposition::affirmed(subject, predicate),
                "-" => Proposition::negated(subject, predicate),
                _ => return Err(Diagnostic::new(line, "proposition sign is `+` or `-`")),
            };
            Ok(ContentDescriptor::Proposition(proposition))
        }
        "object" => Ok(ContentDescriptor::Object(rest.into())),
        "fragment" => {
            let patch = patches
                .get(rest)
                .ok_or_else(|| Diagnostic::new(line, format!("unknown patch `{rest}`")))?;
            Ok(ContentDescriptor::Fragment(patch.clone()))
        }
        other => Err(Diagnostic::new(line, format!("unknown descriptor kind `{other}`"))),
    }
}

/// `QUERY id premise FORMULA` / `QUERY id conclude FORMULA`; each id needs
/// exactly one conclusion.
fn build_queries(lines: &[Line<'_>]) -> Parse<BTreeMap<String, ArgumentForm>> {
    let mut premises: BTreeMap<String, Vec<Formula>> = BTreeMap::new();
    let mut conclusions: BTreeMap<String, Formula> = BTreeMap::new();
    let mut last_line: BTreeMap<String, usize> = BTreeMap::new();
    let mut order: Vec<String> = Vec::new();
    for line in lines {
        let n = line.number;
        if line.words.len() < 4 {
            return Err(Diagnostic::new(n, "usage: QUERY id premise|conclude FORMULA"));
        }
        let id = line.words[1].to_string();
        let role = line.words[2];
        let formula_text = line.words[3..].join(" ");
        let formula = parse_formula(&formula_text).map_err(|e| Diagnostic::new(n, e.to_string()))?;
        if !order.contains(&id) {
            order.push(id.clone());
        }
        last_line.insert(id.clone(), n);
        match role {
            "premise" => premises.entry(id).or_default().push(formula),
            "conclude" => {
                if conclusions.insert(id.clone(), formula).is_some() {
                    return Err(Diagnostic::new(n, format!("query `{id}` concludes twice")));
                }
            }
            other => return Err(Diagnostic::new(n, format!("query role `{other}` is not premise/conclude"))),
        }
    }
    let mut out = BTreeMap::new();
    for id in order {
        let Some(conclusion) = conclusions.remove(&id) else {
            return Err(Diagnostic::new(
                last_line[&id],
                format!("query `{id}` never concludes"),
            ));
        };
        let premises = premises.remove(&id).unwrap_or_default();
        out.insert(id, ArgumentForm::new(premises, conclusion));
    }
    Ok(out)
}
