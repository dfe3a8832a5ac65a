//! Canonical example systems, shared by the test suites and usable as
//! API walkthroughs.
//!
//! Every builder takes a `rename` closure applied to each unit, situation,
//! and link id it mints. Passing [`keep`] uses the documented ids;
//! passing a permutation lets callers verify that checker verdicts do not
//! depend on the spelling of ids.

use crate::extension::Path;
use crate::geom::Rect;
use crate::presence::{patch_from_fragment, Anchor, Patch, WindowSpec};
use crate::universe::{AttributeSchema, Universe, World, WorldId};
use crate::web::{
    CodeId, Proposition, RepresentationalSystem, Rule, RuleBody, SituationId, UnitId, UnitKind,
};
use std::collections::{BTreeMap, BTreeSet};

/// The identity renamer: fixture ids as documented.
pub fn keep(id: &str) -> String {
    id.to_string()
}

/// Ordered station ids of the walk fixture, east to west.
pub const STATIONS: [&str; 8] = [
    "tower",
    "monument",
    "bank",
    "stpauls",
    "holborn",
    "chancery",
    "leicester",
    "piccadilly",
];

const LANDMARKS: [&str; 8] = [
    "keep", "column", "vault", "dome", "museum", "gate", "lion", "circus",
];

/// What to vary when building the walk fixture.
#[derive(Clone, Debug, Default)]
pub struct WalkOptions {
    /// Build without this station (no situation, no stored code, no links
    /// touching it).
    pub skip_station: Option<usize>,
    /// Declare the link between station `i` and `i + 1` without an
    /// alignment, leaving that step ungrounded.
    pub artificial_between: Option<usize>,
    /// Store the first station's patch with a wrong landmark: the stored
    /// view shows a pyramid where the ground shows a keep.
    pub pyramid_at_tower: bool,
}

/// A walk through eight overlapping street views strung into one object.
pub struct Walk {
    pub universe: Universe,
    pub system: RepresentationalSystem,
    /// Situations actually present, in walk order.
    pub stations: Vec<SituationId>,
    /// Links actually present, in walk order.
    pub links: Vec<crate::web::LinkId>,
    /// The name unit whose object ties the walk together.
    pub name: UnitId,
    pub codes: BTreeMap<SituationId, CodeId>,
}

fn walk_schema() -> AttributeSchema {
    AttributeSchema::new(
        vec![
            ("terrain", vec!["street", "park", "water"]),
            (
                "landmark",
                vec![
                    "keep", "column", "vault", "dome", "museum", "gate", "lion", "circus",
                    "pyramid",
                ],
            ),
        ],
        16,
    )
    .unwrap()
}

/// An 18×4 street world: terrain everywhere, one landmark per station at
/// x = 2i + 1, y = 1. Consecutive 4×4 views overlap by two columns.
fn walk_world() -> World {
    let mut world = World::new("london", 18, 4);
    for y in 0..4 {
        for x in 0..18 {
            let terrain = if (x * 3 + y) % 7 == 0 { "park" } else { "street" };
            world.set(x, y, "terrain", terrain);
        }
    }
    for (i, landmark) in LANDMARKS.iter().enumerate() {
        world.set(2 * i as i32 + 1, 1, "landmark", landmark);
    }
    world
}

/// Builds the walk with the documented ids.
pub fn walk(rename: &impl Fn(&str) -> String) -> Walk {
    walk_with(WalkOptions::default(), rename)
}

/// Builds the walk fixture: one situation per station (a veridical 4×4
/// ground copy anchored at x = 2i), grounded links between consecutive
/// stations under the two-column overlap, all codes gathered under one
/// name unit, and an object spanning every station.
pub fn walk_with(options: WalkOptions, rename: &impl Fn(&str) -> String) -> Walk {
    let universe = Universe::build(walk_schema(), vec![walk_world()]).unwrap();
    let window = WindowSpec::new(4, 4, walk_schema()).unwrap();
    let mut system = RepresentationalSystem::new(window);
    system.bind_universe(universe.clone()).unwrap();

    let name: UnitId = rename("LONDON").into();
    system.add_unit(name.clone(), UnitKind::Name).unwrap();

    let world: WorldId = "london".into();
    let mut stations = Vec::new();
    let mut links = Vec::new();
    let mut codes = BTreeMap::new();
    for (i, station) in STATIONS.iter().enumerate() {
        if options.skip_station == Some(i) {
            continue;
        }
        let region = Rect::new(2 * i as i32, 0, 4, 4);
        let fragment = universe.ground_fragment(&world, region).unwrap();
        let mut patch = patch_from_fragment(&fragment);
        if i == 0 && options.pyramid_at_tower {
            patch.set(1, 1, "landmark", "pyramid");
        }
        let id: SituationId = rename(station).into();
        system
            .add_situation(id.clone(), &patch, Anchor::new("london", 2 * i as i32, 0))
            .unwrap();
        let code = system.store_eaf(patch).unwrap();
        system.add_semantic_image(&name, code).unwrap();
        codes.insert(id.clone(), code);
        stations.push(id);
    }
    for i in 0..STATIONS.len() - 1 {
        if options.skip_station == Some(i) || options.skip_station == Some(i + 1) {
            continue;
        }
        let id: crate::web::LinkId = rename(&format!("walk{i}")).into();
        let alignment = if options.artificial_between == Some(i) {
            None
        } else {
            Some(crate::geom::Offset::new(2, 0))
        };
        let a: SituationId = rename(STATIONS[i]).into();
        let b: SituationId = rename(STATIONS[i + 1]).into();
        system.add_link(id.clone(), &a, &b, alignment).unwrap();
        links.push(id);
    }
    system
        .build_object(&name, stations.iter().cloned().collect())
        .unwrap();
    system.validate().unwrap();
    Walk {
        universe,
        system,
        stations,
        links,
        name,
        codes,
    }
}

/// A note whose two remembered page views claim different colors for the
/// same desk cell.
pub struct Notebook {
    pub universe: Universe,
    pub system: RepresentationalSystem,
    /// The gathering unit whose single image carries one token per
    /// remembered view.
    pub unit: UnitId,
    /// The remembered-view units, in storage order.
    pub entries: Vec<UnitId>,
    /// An unanchored 2×2 patch carrying the note's token, ready to
    /// explicitate.
    pub query: Patch,
    pub red_code: CodeId,
    pub blue_code: Option<CodeId>,
}

fn notebook_schema() -> AttributeSchema {
    AttributeSchema::new(vec![("color", vec!["red", "blue", "white"])], 4).unwrap()
}

/// Builds the notebook fixture: a 2×2 world with one red cell on a white
/// desk, remembered once as red (matching the ground) and — unless
/// `with_blue` is off — once as blue. Each memory is its own unit with a
/// stored image anchored at the very same spot, and the note unit's
/// single image holds a token for each memory, so one explicitation of
/// the note merges both into the desk's world branch and the color cell
/// clashes on stored data.
pub fn notebook(with_blue: bool, rename: &impl Fn(&str) -> String) -> Notebook {
    let mut world = World::new("jane", 2, 2);
    world
        .set(0, 0, "color", "red")
        .set(1, 0, "color", "white")
        .set(0, 1, "color", "white")
        .set(1, 1, "color", "white");
    let universe = Universe::build(notebook_schema(), vec![world]).unwrap();
    let window = WindowSpec::new(2, 2, notebook_schema()).unwrap();
    let mut system = RepresentationalSystem::new(window);
    system.bind_universe(universe.clone()).unwrap();

    let desk = |color: &str| {
        Patch::new(2, 2)
            .with(0, 0, "color", color)
            .with(1, 0, "color", "white")
            .with(0, 1, "color", "white")
            .with(1, 1, "color", "white")
            .with_anchor(Anchor::new("jane", 0, 0))
    };
    let red_entry: UnitId = rename("RED_ENTRY").into();
    system.add_unit(red_entry.clone(), UnitKind::Name).unwrap();
    let red_code = system.store_eaf(desk("red")).unwrap();
    system.add_semantic_image(&red_entry, red_code).unwrap();
    let mut entries = vec![red_entry.clone()];

    let mut note_image = Patch::new(2, 2).with_token(0, 0, red_entry);
    let blue_code = if with_blue {
        let blue_entry: UnitId = rename("BLUE_ENTRY").into();
        system.add_unit(blue_entry.clone(), UnitKind::Name).unwrap();
        let code = system.store_eaf(desk("blue")).unwrap();
        system.add_semantic_image(&blue_entry, code).unwrap();
        note_image = note_image.with_token(1, 0, blue_entry.clone());
        entries.push(blue_entry);
        Some(code)
    } else {
        None
    };

    let unit: UnitId = rename("NOTE").into();
    system.add_unit(unit.clone(), UnitKind::Name).unwrap();
    let code = system.store_eaf(note_image).unwrap();
    system.add_semantic_image(&unit, code).unwrap();
    let query = Patch::new(2, 2).with_token(0, 0, unit.clone());
    system.validate().unwrap();
    Notebook {
        universe,
        system,
        unit,
        entries,
        query,
        red_code,
        blue_code,
    }
}

/// A unit whose only image displays its own token: substitution can never
/// terminate. Returns the system and the unit.
pub fn liar(rename: &impl Fn(&str) -> String) -> (RepresentationalSystem, UnitId) {
    let window = WindowSpec::new(2, 1, notebook_schema()).unwrap();
    let mut system = RepresentationalSystem::new(window);
    let unit: UnitId = rename("L").into();
    system.add_unit(unit.clone(), UnitKind::Name).unwrap();
    let image = Patch::new(2, 1)
        .with(0, 0, "color", "red")
        .with_token(1, 0, unit.clone());
    let code = system.store_eaf(image).unwrap();
    system.add_semantic_image(&unit, code).unwrap();
    system.validate().unwrap();
    (system, unit)
}

/// A world drawn entirely by a finite description.
pub struct CirclePlane {
    pub universe: Universe,
    pub system: RepresentationalSystem,
    pub unit: UnitId,
}

fn circle_schema() -> AttributeSchema {
    AttributeSchema::new(vec![("ink", vec!["on", "off"])], 4).unwrap()
}

/// Builds a 16×16 world showing the quantized unit circle and a system
/// whose single unit carries the circle as an intensional rule (or no
/// content at all when `with_rule` is off).
///
/// The ground is rasterized here by the corner-sign route — a cell is
/// crossed iff its scaled corner distances straddle the squared radius —
/// which is independent of the box-range route the rule evaluator uses,
/// so the two implementations check each other.
pub fn circle_plane(with_rule: bool, rename: &impl Fn(&str) -> String) -> CirclePlane {
    let mut world = World::new("plane", 16, 16);
    for y in 0..16i64 {
        for x in 0..16i64 {
            let corners = [
                (2 * x - 16, 2 * y - 16),
                (2 * x - 14, 2 * y - 16),
                (2 * x - 16, 2 * y - 14),
                (2 * x - 14, 2 * y - 14),
            ];
            let d2: Vec<i64> = corners.iter().map(|(cx, cy)| cx * cx + cy * cy).collect();
            let crossed = d2.iter().any(|&d| d <= 256) && d2.iter().any(|&d| d >= 256);
            world.set(x as i32, y as i32, "ink", if crossed { "on" } else { "off" });
        }
    }
    let universe = Universe::build(circle_schema(), vec![world]).unwrap();
    let window = WindowSpec::new(16, 16, circle_schema()).unwrap();
    let mut system = RepresentationalSystem::new(window);
    system.bind_universe(universe.clone()).unwrap();
    let unit: UnitId = rename("CIRCLE").into();
    system.add_unit(unit.clone(), UnitKind::Name).unwrap();
    if with_rule {
        system
            .add_semantic_rule(
                &unit,
                Rule::new(
                    rename("draw"),
                    RuleBody::Circle {
                        size: 16,
                        attribute: "ink".into(),
                        on: "on".into(),
                        off: "off".into(),
                    },
                ),
            )
            .unwrap();
    }
    system.validate().unwrap();
    CirclePlane {
        universe,
        system,
        unit,
    }
}

/// Five suspects and a matching law.
pub struct DnaCase {
    pub universe: Universe,
    pub system: RepresentationalSystem,
    /// The law-label unit under which the law is registered.
    pub label: UnitId,
    pub law: crate::logic::Law,
    /// The five donor name units, in order.
    pub donors: Vec<UnitId>,
    pub matches: UnitId,
    pub guilty: UnitId,
}

fn dna_schema() -> AttributeSchema {
    AttributeSchema::new(
        vec![
            ("marker", vec!["m1", "m2", "m3", "m4", "m5"]),
            ("status", vec!["guilty", "clear"]),
        ],
        8,
    )
    .unwrap()
}

/// Builds the matching-law fixture: a 10×1 world of five donor records
/// (marker cell + status cell), donor name units anchored to their
/// records, two predicates — « matches the crime-scene marker » (template
/// m3) and « guilty » — and the law « from MATCHES(x), GUILTY(x) » over
/// all five donors. Only the third donor shows the marker, and only that
/// donor is guilty, so every instance either holds or has no content.
pub fn dna_case(rename: &impl Fn(&str) -> String) -> DnaCase {
    let mut world = World::new("lab", 10, 1);
    for i in 0..5i32 {
        world.set(2 * i, 0, "marker", &format!("m{}", i + 1));
        world.set(2 * i + 1, 0, "status", if i == 2 { "guilty" } else { "clear" });
    }
    let universe = Universe::build(dna_schema(), vec![world]).unwrap();
    let window = WindowSpec::new(2, 1, dna_schema()).unwrap();
    let mut system = RepresentationalSystem::new(window);
    system.bind_universe(universe.clone()).unwrap();

    let mut donors = Vec::new();
    for i in 0..5i32 {
        let donor: UnitId = rename(&format!("donor{}", i + 1)).into();
        system.add_unit(donor.clone(), UnitKind::Name).unwrap();
        let fragment = universe
            .ground_fragment(&"lab".into(), Rect::new(2 * i, 0, 2, 1))
            .unwrap();
        let code = system.store_eaf(patch_from_fragment(&fragment)).unwrap();
        system.add_semantic_image(&donor, code).unwrap();
        donors.push(donor);
    }
    let matches: UnitId = rename("MATCHES").into();
    system.add_unit(matches.clone(), UnitKind::Predicate).unwrap();
    let code = system.store_template(&Patch::new(1, 1).with(0, 0, "marker", "m3"));
    system.add_semantic_image(&matches, code).unwrap();
    let guilty: UnitId = rename("GUILTY").into();
    system.add_unit(guilty.clone(), UnitKind::Predicate).unwrap();
    let code = system.store_template(&Patch::new(1, 1).with(0, 0, "status", "guilty"));
    system.add_semantic_image(&guilty, code).unwrap();

    let imp = crate::logic::implicate(
        &system,
        crate::logic::ContentDescriptor::Proposition(Proposition::affirmed(
            donors[2].clone(),
            matches.clone(),
        )),
        crate::logic::ContentDescriptor::Proposition(Proposition::affirmed(
            donors[2].clone(),
            guilty.clone(),
        )),
        None,
    )
    .unwrap();
    let domain: BTreeSet<UnitId> = donors.iter().cloned().collect();
    let law = crate::logic::generalize(&mut system, &imp, &donors[2], domain).unwrap();
    let label: UnitId = rename("MATCH_LAW").into();
    system.add_unit(label.clone(), UnitKind::LawLabel).unwrap();
    system.add_law(&label, law.clone()).unwrap();
    system.validate().unwrap();
    DnaCase {
        universe,
        system,
        label,
        law,
        donors,
        matches,
        guilty,
    }
}

/// The walk's start-to-end path under the documented ids, for callers
/// that need a known-good scenario.
pub fn walk_path(walk: &Walk) -> Option<Path> {
    let from = walk.stations.first()?;
    let to = walk.stations.last()?;
    crate::extension::find_path(&walk.system, from, to).ok()?
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::{explicitate, ExplicitationTarget, IncoherenceKind, DEFAULT_BUDGET};
    use crate::logic::{
        check_completeness, check_faithfulness, check_s_completeness, FaithfulnessClass,
        PropertyWitness,
    };

    #[test]
    fn the_walk_validates_and_is_complete_and_faithful() {
        let walk = walk(&keep);
        assert_eq!(walk.stations.len(), 8);
        assert_eq!(walk.links.len(), 7);
        assert!(check_completeness(&walk.system, &walk.universe).unwrap().passed);
        assert!(check_s_completeness(&walk.system, &walk.universe).unwrap().passed);
        assert!(check_faithfulness(&walk.system, &walk.universe).unwrap().passed);
    }

    #[test]
    fn the_pyramid_variant_is_unfaithful_at_exactly_one_anchor() {
        let walk = walk_with(
            WalkOptions {
                pyramid_at_tower: true,
                ..WalkOptions::default()
            },
            &keep,
        );
        let report = check_faithfulness(&walk.system, &walk.universe).unwrap();
        assert_eq!(report.witnesses.len(), 1);
        let PropertyWitness::Unfaithful(w) = &report.witnesses[0] else {
            panic!("expected an unfaithfulness witness");
        };
        assert_eq!(w.class, FaithfulnessClass::ErroneousDatum);
        assert_eq!(w.cells.len(), 1);
        assert_eq!(w.cells[0].stored, "pyramid");
        assert_eq!(w.cells[0].ground, "keep");
    }

    #[test]
    fn skipping_an_end_station_uncovers_its_exclusive_columns() {
        let walk = walk_with(
            WalkOptions {
                skip_station: Some(7),
                ..WalkOptions::default()
            },
            &keep,
        );
        let report = check_completeness(&walk.system, &walk.universe).unwrap();
        assert!(!report.passed);
        let PropertyWitness::MissingRegion(missing) = &report.witnesses[0] else {
            panic!("expected a missing region");
        };
        assert_eq!(missing.region, Rect::new(16, 0, 2, 4));
    }

    #[test]
    fn the_notebook_explicitation_is_extrinsically_incoherent() {
        let nb = notebook(true, &keep);
        let outcome = explicitate(&nb.system, ExplicitationTarget::Unit(&nb.unit), DEFAULT_BUDGET).unwrap();
        let report = outcome.report().expect("incoherent");
        assert_eq!(report.kind, IncoherenceKind::Extrinsic);
        let crate::extension::IncoherenceWitness::Conflict { cells } = &report.witness else {
            panic!("expected a value conflict");
        };
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].coord, crate::geom::Coord::new(0, 0));
        let shown: BTreeSet<String> =
            [&cells[0].left, &cells[0].right].iter().map(|v| v.to_string()).collect();
        assert_eq!(shown, BTreeSet::from(["color=red".into(), "color=blue".into()]));

        let nb = notebook(false, &keep);
        let outcome = explicitate(&nb.system, ExplicitationTarget::Unit(&nb.unit), DEFAULT_BUDGET).unwrap();
        assert!(outcome.is_coherent());
    }

    #[test]
    fn the_liar_cycles_intrinsically() {
        let (system, unit) = liar(&keep);
        let outcome = explicitate(&system, ExplicitationTarget::Unit(&unit), DEFAULT_BUDGET).unwrap();
        let report = outcome.report().expect("incoherent");
        assert_eq!(report.kind, IncoherenceKind::Intrinsic);
    }

    #[test]
    fn the_circle_rule_makes_the_plane_s_complete() {
        let plane = circle_plane(true, &keep);
        assert!(check_s_completeness(&plane.system, &plane.universe).unwrap().passed);
        let bare = circle_plane(false, &keep);
        assert!(!check_s_completeness(&bare.system, &bare.universe).unwrap().passed);
    }

    #[test]
    fn the_dna_law_never_fails_on_its_domain() {
        let case = dna_case(&keep);
        assert!(check_faithfulness(&case.system, &case.universe).unwrap().passed);
        for donor in &case.donors {
            let imp = crate::logic::instantiate(&case.system, &case.law, donor).unwrap();
            let outcome = crate::logic::eval_particular_implication(&case.system, &imp, &"lab".into()).unwrap();
            if donor == &case.donors[2] {
                assert_eq!(outcome, crate::logic::ImplicationOutcome::Holds);
            } else {
                assert_eq!(outcome, crate::logic::ImplicationOutcome::NoContent);
            }
        }
    }

    #[test]
    fn renaming_ids_does_not_change_fixture_shape() {
        let reversed = |id: &str| id.chars().rev().collect::<String>();
        let walk = walk(&reversed);
        assert_eq!(walk.stations.len(), 8);
        assert!(walk.system.situation(&"rewot".into()).is_ok());
        assert!(check_faithfulness(&walk.system, &walk.universe).unwrap().passed);
    }
}
