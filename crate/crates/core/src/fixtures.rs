//! Reference fixtures: synthetic coded data, bundled procedures and random
//! ground-truth trees.
//!
//! The coded data is synthetic. [`noise_free_agreed`] is generated by the
//! tree of [`TreeNode::reference`] with class marginals DONT 100, NEG_TC 57,
//! NEVER 22. Two coder pairs of 279 rows each are provided:
//!
//! * [`coder_pair`] agrees on exactly the 179 noise-free rows and disagrees
//!   on every one of the other 100.
//! * [`reliability_pair`] has the same agreement layout but marginals chosen
//!   so that per-feature agreement and kappa land on reported reference
//!   values (awareness 0.935 / 0.76, safety 0.907 / 0.71, intentionality
//!   0.749 / 0.46).
//!
//! A single pair cannot do both jobs: a tree-consistent agreed set puts
//! every aware row under NEG_TC, which forces at least 114 of the 558
//! awareness assignments to be AW and pushes awareness kappa above 0.82.
//!
//! Every generator is deterministic. The files under `data/` are the output
//! of `cargo run --example write_fixtures`.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::c45::TreeNode;
use crate::coding::{
    Awareness, CodedExample, Dataset, Feature, FeatureValue, FormLabel, Intentionality, Safety,
    AGREED_CODER,
};
use crate::network::{compile, default_form_specs, CompilerInputs, SystemNetwork};
use crate::planner::{
    ActionProposition, GenerationParams, Method, ProcedureModel, WarningMode, WarningSpec,
    VALUE_BINDING,
};
use crate::Language;

pub const CODER_A: &str = "coder-a";
pub const CODER_B: &str = "coder-b";

/// Rows in each coder file.
pub const PAIR_ROWS: usize = 279;
/// Rows on which a coder pair agrees on form and all three features.
pub const AGREED_ROWS: usize = 179;
/// Labels flipped by [`noisy_agreed`] (a quarter of 179, rounded).
pub const NOISY_FLIPS: usize = 45;

const SHUFFLE_SEED: u64 = 1998;
const NOISE_SEED: u64 = 25;

const VERBS: [&str; 12] = [
    "remove",
    "touch",
    "open",
    "bend",
    "lubricate",
    "adjust",
    "unplug",
    "lift",
    "clean",
    "cover",
    "tighten",
    "move",
];
const NOUNS: [&str; 12] = [
    "the cover",
    "the blade",
    "the cable",
    "the filter",
    "the plug",
    "the hinge",
    "the switch",
    "the lamp",
    "the fan",
    "the drain hose",
    "the valve",
    "the control panel",
];

fn fv(aw: Awareness, int: Intentionality, saf: Safety) -> FeatureValue {
    FeatureValue::new(aw, int, saf)
}

fn expression(form: FormLabel, i: usize) -> (String, &'static str) {
    let verb = VERBS[i % VERBS.len()];
    let noun = NOUNS[(i * 5 + i / VERBS.len()) % NOUNS.len()];
    match (form, i % 2) {
        (FormLabel::Dont, 0) => (format!("Do not {verb} {noun}."), "do not"),
        (FormLabel::Dont, _) => (format!("Don't {verb} {noun}."), "don't"),
        (FormLabel::Never, _) => (format!("Never {verb} {noun}."), "never"),
        (FormLabel::NegTc, 0) => (format!("Take care not to {verb} {noun}."), "take care"),
        (FormLabel::NegTc, _) => (format!("Be careful not to {verb} {noun}."), "be careful"),
    }
}

fn example(
    id: String,
    i: usize,
    form: FormLabel,
    features: FeatureValue,
    coder: &str,
) -> CodedExample {
    let (text, subform) = expression(form, i);
    CodedExample {
        id,
        text,
        form,
        features,
        coder: coder.to_string(),
        subform: Some(subform.to_string()),
    }
}

/// Feature cells of the noise-free fixture with their row counts. Each
/// cell's form is the reference tree's label for its vector.
pub const NOISE_FREE_CELLS: [(Awareness, Intentionality, Safety, usize); 8] = [
    (Awareness::Aw, Intentionality::Con, Safety::Badp, 8),
    (Awareness::Aw, Intentionality::Con, Safety::Not, 20),
    (Awareness::Aw, Intentionality::Unc, Safety::Badp, 6),
    (Awareness::Aw, Intentionality::Unc, Safety::Not, 23),
    (Awareness::Unaw, Intentionality::Con, Safety::Badp, 52),
    (Awareness::Unaw, Intentionality::Con, Safety::Not, 14),
    (Awareness::Unaw, Intentionality::Unc, Safety::Not, 34),
    (Awareness::Unaw, Intentionality::Unc, Safety::Badp, 22),
];

fn noise_free_rows(coder: &str) -> Vec<CodedExample> {
    let tree = TreeNode::reference();
    let mut cells: Vec<FeatureValue> = NOISE_FREE_CELLS
        .iter()
        .flat_map(|&(aw, int, saf, n)| std::iter::repeat_n(fv(aw, int, saf), n))
        .collect();
    cells.shuffle(&mut ChaCha8Rng::seed_from_u64(SHUFFLE_SEED));
    cells
        .into_iter()
        .enumerate()
        .map(|(i, f)| example(format!("ex-{:03}", i + 1), i, tree.classify(&f), f, coder))
        .collect()
}

/// 179 agreed examples generated by the reference tree.
pub fn noise_free_agreed() -> Dataset {
    Dataset::from_examples(noise_free_rows(AGREED_CODER)).expect("unique ids")
}

/// The noise-free fixture with exactly [`NOISY_FLIPS`] labels changed to a
/// different class.
pub fn noisy_agreed() -> Dataset {
    let mut rows = noise_free_rows(AGREED_CODER);
    let mut rng = ChaCha8Rng::seed_from_u64(NOISE_SEED);
    let mut flipped = index::sample(&mut rng, rows.len(), NOISY_FLIPS).into_vec();
    flipped.sort_unstable();
    for i in flipped {
        let shift = rng.random_range(1..3);
        let row = &mut rows[i];
        row.form = FormLabel::ALL[(row.form.index() + shift) % 3];
        let (text, subform) = expression(row.form, i);
        row.text = text;
        row.subform = Some(subform.to_string());
    }
    Dataset::from_examples(rows).expect("unique ids")
}

/// Layout of the 100 disagreement rows. Row `k` disagrees on
/// intentionality when `k < 70`, on awareness when `70 <= k < 88`, and on
/// safety when `k >= 88` or `k < 14`. Disagreements alternate direction in
/// equal halves within each feature.
fn disagreement_values(k: usize) -> (FeatureValue, FeatureValue, FormLabel) {
    use Awareness::*;
    use Intentionality::*;
    use Safety::*;
    let mut a = fv(Unaw, Unc, Not);
    let mut b = a;
    if k < 70 {
        (a.intentionality, b.intentionality) = if k < 35 { (Con, Unc) } else { (Unc, Con) };
    }
    if (70..88).contains(&k) {
        (a.awareness, b.awareness) = if k < 79 { (Aw, Unaw) } else { (Unaw, Aw) };
    }
    let safety_rank = if k >= 88 {
        Some(k - 88)
    } else if k < 14 {
        Some(k + 12)
    } else {
        None
    };
    if let Some(r) = safety_rank {
        (a.safety, b.safety) = if r < 13 { (Badp, Not) } else { (Not, Badp) };
    }
    // DONT 67, NEVER 18, NEG_TC 15 across the block.
    let form = match k {
        0..67 => FormLabel::Dont,
        67..85 => FormLabel::Never,
        _ => FormLabel::NegTc,
    };
    (a, b, form)
}

/// 279-row coder pair whose agreed subset is exactly [`noise_free_agreed`]
/// (same ids, same order).
pub fn coder_pair() -> (Dataset, Dataset) {
    let agreed = noise_free_rows(AGREED_CODER);
    let mut rng = ChaCha8Rng::seed_from_u64(SHUFFLE_SEED + 1);
    let mut slots = vec![false; PAIR_ROWS];
    for i in index::sample(&mut rng, PAIR_ROWS, PAIR_ROWS - AGREED_ROWS) {
        slots[i] = true;
    }
    let (mut a, mut b) = (Vec::with_capacity(PAIR_ROWS), Vec::with_capacity(PAIR_ROWS));
    let (mut next_agreed, mut next_disagreed) = (agreed.into_iter(), 0..);
    for (pos, disagree) in slots.into_iter().enumerate() {
        if disagree {
            let k = next_disagreed.next().expect("unbounded");
            let (fa, fb, form) = disagreement_values(k);
            let id = format!("dx-{:03}", k + 1);
            a.push(example(id.clone(), pos, form, fa, CODER_A));
            b.push(example(id, pos, form, fb, CODER_B));
        } else {
            let row = next_agreed.next().expect("179 agreed rows");
            a.push(CodedExample {
                coder: CODER_A.into(),
                ..row.clone()
            });
            b.push(CodedExample {
                coder: CODER_B.into(),
                ..row
            });
        }
    }
    (
        Dataset::from_examples(a).expect("unique ids"),
        Dataset::from_examples(b).expect("unique ids"),
    )
}

/// 279-row coder pair realizing the reference agreement and kappa values.
///
/// | column         | both minority | both majority | disagree |
/// |----------------|---------------|---------------|----------|
/// | intentionality | 67 CON        | 142 UNC       | 70       |
/// | awareness      | 36 AW         | 225 UNAW      | 18       |
/// | safety         | 43 BADP       | 210 NOT       | 26       |
///
/// Form agrees everywhere (DONT 167, NEVER 40, NEG_TC 72), and the 179 rows
/// that agree on everything have forms DONT 100, NEG_TC 57, NEVER 22.
pub fn reliability_pair() -> (Dataset, Dataset) {
    let mut rows: Vec<(FeatureValue, FeatureValue, FormLabel)> = (0..PAIR_ROWS)
        .map(|k| {
            if k < 100 {
                return disagreement_values(k);
            }
            let form = match k - 100 {
                0..100 => FormLabel::Dont,
                100..157 => FormLabel::NegTc,
                _ => FormLabel::Never,
            };
            (
                fv(Awareness::Unaw, Intentionality::Unc, Safety::Not),
                fv(Awareness::Unaw, Intentionality::Unc, Safety::Not),
                form,
            )
        })
        .collect();

    // Agreeing minority values go to the first eligible rows of each column.
    let mut set =
        |eligible: &dyn Fn(usize) -> bool, count: usize, apply: &dyn Fn(&mut FeatureValue)| {
            for k in (0..PAIR_ROWS).filter(|&k| eligible(k)).take(count) {
                apply(&mut rows[k].0);
                apply(&mut rows[k].1);
            }
        };
    set(&|k| k >= 70, 67, &|f| {
        f.intentionality = Intentionality::Con
    });
    set(&|k| !(70..88).contains(&k), 36, &|f| {
        f.awareness = Awareness::Aw
    });
    set(&|k| (14..88).contains(&k) || k >= 100, 43, &|f| {
        f.safety = Safety::Badp
    });

    rows.shuffle(&mut ChaCha8Rng::seed_from_u64(SHUFFLE_SEED + 2));
    let (mut a, mut b) = (Vec::with_capacity(PAIR_ROWS), Vec::with_capacity(PAIR_ROWS));
    for (i, (fa, fb, form)) in rows.into_iter().enumerate() {
        let id = format!("rel-{:03}", i + 1);
        a.push(example(id.clone(), i, form, fa, CODER_A));
        b.push(example(id, i, form, fb, CODER_B));
    }
    (
        Dataset::from_examples(a).expect("unique ids"),
        Dataset::from_examples(b).expect("unique ids"),
    )
}

/// Random tree over the three binary features with unit leaves. A feature
/// never repeats on a path but may appear in several subtrees.
pub fn random_tree(seed: u64) -> TreeNode {
    fn grow(rng: &mut ChaCha8Rng, available: &[Feature], depth: usize) -> TreeNode {
        let split_probability = [0.9, 0.7, 0.5][depth.min(2)];
        if available.is_empty() || !rng.random_bool(split_probability) {
            return TreeNode::unit_leaf(FormLabel::ALL[rng.random_range(0..3)]);
        }
        let feature = available[rng.random_range(0..available.len())];
        let rest: Vec<Feature> = available
            .iter()
            .copied()
            .filter(|f| *f != feature)
            .collect();
        let children = (0..2).map(|_| grow(rng, &rest, depth + 1)).collect();
        TreeNode::internal(feature, children)
    }
    grow(&mut ChaCha8Rng::seed_from_u64(seed), &Feature::ALL, 0)
}

/// Compiler inputs for the reference tree over English and French.
pub fn reference_compiler_inputs() -> CompilerInputs {
    CompilerInputs {
        languages: Language::ALL.into_iter().collect(),
        entry_features: vec!["warning".into()],
        tree: TreeNode::reference(),
        value_binding: VALUE_BINDING.into(),
        form_specs: default_form_specs(),
        output_name: "preventative".into(),
    }
}

pub fn reference_network() -> SystemNetwork {
    compile(&reference_compiler_inputs()).expect("reference tree compiles")
}

fn prop(id: &str, process: &str, patient: &str) -> ActionProposition {
    ActionProposition::new(id, process, patient)
}

fn single_method(
    id: &str,
    goal: ActionProposition,
    name: &str,
    steps: Vec<ActionProposition>,
    warning: ActionProposition,
    params: GenerationParams,
) -> ProcedureModel {
    ProcedureModel {
        id: id.into(),
        goal,
        methods: vec![Method {
            name: name.into(),
            steps,
            warning: Some(WarningSpec {
                action: warning,
                params,
            }),
        }],
    }
}

/// Repair the device: three steps and a warning against damaging the
/// service cover (inconvenience, accidental, aware).
pub fn repair_procedure() -> ProcedureModel {
    single_method(
        "repair-device",
        prop("goal", "repair", "device"),
        "Repair Method",
        vec![
            prop("s1", "consult", "repair-manual"),
            prop("s2", "unplug", "device"),
            prop("s3", "remove", "service-cover"),
        ],
        prop("w1", "damage", "service-cover"),
        GenerationParams::prevent(Safety::Not, Intentionality::Unc, Awareness::Aw),
    )
}

/// Installation procedure warning against dismantling the frame
/// (inconvenience, conscious, unaware).
pub fn dismantle_procedure() -> ProcedureModel {
    single_method(
        "install-part",
        prop("goal", "install", "new-part"),
        "Installation Method",
        vec![
            prop("s1", "unplug", "device"),
            prop("s2", "remove", "service-cover"),
            prop("s3", "install", "new-part"),
        ],
        prop("w1", "dismantle", "frame"),
        GenerationParams::prevent(Safety::Not, Intentionality::Con, Awareness::Unaw),
    )
}

/// Repair variant warning against disconnecting the ground (danger,
/// accidental, unaware).
pub fn ground_procedure() -> ProcedureModel {
    single_method(
        "disconnect-ground",
        prop("goal", "repair", "device"),
        "Grounding Method",
        vec![
            prop("s1", "consult", "repair-manual"),
            prop("s2", "unplug", "device"),
        ],
        prop("w1", "disconnect", "ground"),
        GenerationParams::prevent(Safety::Badp, Intentionality::Unc, Awareness::Unaw),
    )
}

/// The repair procedure with its warning switched to ensure mode.
pub fn ensure_procedure() -> ProcedureModel {
    let mut p = repair_procedure();
    p.id = "ensure-cover".into();
    if let Some(w) = p.methods[0].warning.as_mut() {
        w.params.mode = WarningMode::Ensure;
    }
    p
}

pub fn procedures() -> Vec<ProcedureModel> {
    vec![
        repair_procedure(),
        dismantle_procedure(),
        ground_procedure(),
        ensure_procedure(),
    ]
}

/// Every generated data file as `(path relative to data/, content)`.
pub fn files() -> Vec<(String, String)> {
    let csv = |d: &Dataset| d.to_csv().expect("fixture serializes");
    let (a, b) = coder_pair();
    let (ra, rb) = reliability_pair();
    let mut out = vec![
        ("agreed.csv".to_string(), csv(&noise_free_agreed())),
        ("noisy25.csv".to_string(), csv(&noisy_agreed())),
        ("coders/coder_a.csv".to_string(), csv(&a)),
        ("coders/coder_b.csv".to_string(), csv(&b)),
        ("reliability/coder_a.csv".to_string(), csv(&ra)),
        ("reliability/coder_b.csv".to_string(), csv(&rb)),
        (
            "reference_tree.json".to_string(),
            serde_json::to_string_pretty(&TreeNode::reference()).expect("tree serializes") + "\n",
        ),
        ("network.json".to_string(), reference_network().to_json()),
    ];
    for p in procedures() {
        out.push((format!("procedures/{}.json", p.id), p.to_json()));
    }
    out
}
