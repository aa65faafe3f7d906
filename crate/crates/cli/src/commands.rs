use semihier::classify::{classify_rank_n_minus_1, split_no_loop, split_with_loop, SplitCase};
use semihier::hierarchy::{augmented_level_matrix, inclusion_operator, level_matrix, level_matrix_via_permanents};
use semihier::kernel::kernel_of;
use semihier::measure::convolve;
use semihier::semigroup::{generate_semigroup, DEFAULT_CAP};
use semihier::subset::Layer;
use semihier::{Analysis, ColorSystem};

use crate::error::CliError;
use crate::input::SystemSpec;
use crate::report::*;

/// Flags shared by all subcommands after merging with the document options.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    pub levels: Vec<usize>,
    pub cap: Option<usize>,
    pub augmented: bool,
    pub oracle: bool,
    pub inclusion: bool,
}

impl Settings {
    fn cap(&self, spec: &SystemSpec) -> usize {
        self.cap.or(spec.options.cap).unwrap_or(DEFAULT_CAP)
    }

    fn levels(&self, spec: &SystemSpec) -> Option<Vec<usize>> {
        if !self.levels.is_empty() {
            Some(self.levels.clone())
        } else {
            spec.options.levels.clone()
        }
    }
}

pub fn echo(cs: &ColorSystem) -> SystemEcho {
    SystemEcho {
        n: cs.n(),
        colors: cs.colors().iter().map(|c| c.oneline()).collect(),
        weights: exact_vec(cs.weights()),
    }
}

fn labels(n: usize, level: usize, augmented: bool) -> Result<Vec<StateLabel>, CliError> {
    let layer = Layer::new(n, level)?;
    let mut out: Vec<StateLabel> = layer.subsets().map(|s| StateLabel::Subset(s.members().to_vec())).collect();
    if augmented {
        out.push(StateLabel::Collapsed);
    }
    Ok(out)
}

fn analysis(spec: &SystemSpec, settings: &Settings) -> Result<Analysis, CliError> {
    Ok(Analysis::with_cap(spec.system()?, settings.cap(spec))?)
}

pub fn hierarchy(spec: &SystemSpec, settings: &Settings) -> Result<Report, CliError> {
    let cs = spec.system()?;
    let level = settings.levels(spec).and_then(|l| l.first().copied()).unwrap_or(1);
    let n = cs.n();
    let mut matrices = Vec::new();
    let mut agrees = true;
    for f in cs.colors() {
        let m = if settings.augmented { augmented_level_matrix(f, level)? } else { level_matrix(f, level)? };
        if settings.oracle {
            agrees &= level_matrix(f, level)? == level_matrix_via_permanents(f, level)?;
        }
        matrices.push(ColorMatrix { color: f.oneline(), rows: exact_rows(&m.matrix) });
    }
    let inclusion = if settings.inclusion && level >= 1 {
        let e = inclusion_operator(level, level - 1, n)?;
        Some(InclusionBlock {
            from: level,
            to: level - 1,
            column_labels: labels(n, level - 1, false)?,
            rows: exact_rows(&e.matrix),
        })
    } else {
        None
    };
    Ok(Report {
        input: echo(&cs),
        payload: Payload::Hierarchy(HierarchyReport {
            level,
            augmented: settings.augmented,
            labels: labels(n, level, settings.augmented)?,
            matrices,
            oracle_agrees: settings.oracle.then_some(agrees),
            inclusion,
        }),
    })
}

pub fn kernel(spec: &SystemSpec, settings: &Settings) -> Result<Report, CliError> {
    let cs = spec.system()?;
    let st = generate_semigroup(&cs, settings.cap(spec))?;
    let ks = kernel_of(&st)?;
    let (bx, by) = ks.base_cell();
    let group = ks.local_group(bx, by)?;
    let idempotents = (0..ks.partitions().len())
        .map(|x| (0..ks.ranges().len()).map(|y| ks.idempotent(x, y).oneline()).collect())
        .collect();
    Ok(Report {
        input: echo(&cs),
        payload: Payload::Kernel(KernelReport {
            semigroup_size: st.len(),
            kernel_size: ks.len(),
            rank: ks.rank(),
            group_order: ks.group_order(),
            partitions: ks.partitions().to_vec(),
            ranges: ks.ranges().to_vec(),
            idempotents,
            local_group_abelian: group.is_abelian(),
            local_group_orders: group.order_profile(),
            right_group: ks.structural_right_group(),
        }),
    })
}

pub fn limits(spec: &SystemSpec, settings: &Settings) -> Result<Report, CliError> {
    let a = analysis(spec, settings)?;
    let ks = &a.kernel;
    let lambda = ks
        .elements()
        .iter()
        .enumerate()
        .map(|(p, k)| WeightedElement {
            element: k.oneline(),
            weight: Exact(a.lambda.weight(ks.table_index(p)).clone()),
        })
        .collect();
    let idempotent = convolve(&a.lambda, &a.lambda, &a.semigroup)? == a.lambda;
    Ok(Report {
        input: echo(&a.system),
        payload: Payload::Limits(LimitsReport {
            kernel_size: ks.len(),
            group_order: a.factorization.group_order,
            alpha: exact_vec(&a.factorization.alpha),
            beta: exact_vec(&a.factorization.beta),
            lambda,
            idempotent,
        }),
    })
}

pub fn fields(spec: &SystemSpec, settings: &Settings) -> Result<Report, CliError> {
    let a = analysis(spec, settings)?;
    let levels = settings.levels(spec).unwrap_or_else(|| (1..=a.rank()).collect());
    let mut out = Vec::with_capacity(levels.len());
    for level in levels {
        let pi = a.pi_field(level)?;
        let u = a.u_field(level)?;
        out.push(LevelFields {
            level,
            labels: labels(a.n(), level, false)?,
            pi_raw: exact_vec(&pi.raw),
            pi: exact_vec(&pi.values),
            u_raw: exact_vec(&u.raw),
            u: exact_vec(&u.values),
        });
    }
    Ok(Report {
        input: echo(&a.system),
        payload: Payload::Fields(FieldsReport {
            rank: a.rank(),
            stationary: exact_vec(&a.stationary()?.values),
            levels: out,
        }),
    })
}

pub fn rank(spec: &SystemSpec, settings: &Settings) -> Result<Report, CliError> {
    let a = analysis(spec, settings)?;
    let w = a.detect_rank()?;
    Ok(Report {
        input: echo(&a.system),
        payload: Payload::Rank(RankReport { rank: w.rank, witness: exact_vec(&w.witness), kernel_rank: a.rank() }),
    })
}

pub fn right_group(spec: &SystemSpec, settings: &Settings) -> Result<Report, CliError> {
    let a = analysis(spec, settings)?;
    let report = a.right_group()?;
    Ok(Report {
        input: echo(&a.system),
        payload: Payload::RightGroup(RightGroupReport {
            right_group: report.is_right_group,
            partition: report.partition,
            pair_labels: labels(a.n(), 2, false)?,
            u2: exact_vec(&a.u2()?.values),
        }),
    })
}

fn case_name(case: SplitCase) -> String {
    match case {
        SplitCase::A => "a".into(),
        SplitCase::B => "b".into(),
    }
}

/// Builds the split system from two permutations and classifies it. Without
/// an explicit case, a precursor with a loop is split as case a.
pub fn construct(spec: &SystemSpec, case: Option<SplitCase>) -> Result<Report, CliError> {
    let precursor = spec.system()?;
    let [r, b] = precursor.colors() else {
        return Err(semihier::Error::ColorCount { expected: 2, actual: precursor.d() }.into());
    };
    let case = case.unwrap_or(if r.fixed_points().is_empty() && b.fixed_points().is_empty() {
        SplitCase::B
    } else {
        SplitCase::A
    });
    let built = match case {
        SplitCase::A => split_with_loop(r, b)?,
        SplitCase::B => split_no_loop(r, b)?,
    };
    let report = classify_rank_n_minus_1(&built)?;
    let consistent = report.is_consistent();
    Ok(Report {
        input: echo(&precursor),
        payload: Payload::Construct(ConstructReport {
            case: case_name(case),
            system: echo(&built),
            classification: Classification {
                case: case_name(report.case),
                doubleton: report.doubleton.to_vec(),
                relabel: report.relabel,
                q: Exact(report.q),
                max_in_degree: report.max_in_degree,
                max_in_neighbours: report.max_in_neighbours,
                right_group: report.right_group,
                consistent,
                pi: exact_vec(&report.observed_pi),
                beta: exact_vec(&report.observed_beta),
                ranges: report.observed_ranges,
                u2: exact_vec(&report.observed_u2),
            },
        }),
    })
}
