//! Built-in example groups with the facts they are known to satisfy.

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::linalg::ExactMatrix;

/// Order, number of classes and number of classes of each age.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedFacts {
    pub order: usize,
    pub class_count: usize,
    /// `age_counts[a]` = number of classes of age `a`.
    pub age_counts: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub spec: GroupSpec,
    pub symplectic: bool,
    pub expected: ExpectedFacts,
}

/// Matrix on `(C^2)^n` moving block `i` to block `perm[i]`.
pub fn block_permutation(perm: &[usize], order: u32) -> ExactMatrix {
    let p: Vec<usize> = (0..2 * perm.len())
        .map(|i| 2 * perm[i / 2] + i % 2)
        .collect();
    ExactMatrix::permutation(&p, order)
}

fn root(k: i64, n: u32) -> CycNum {
    CycNum::root_of_unity(k, n as i64).expect("positive order")
}

/// `diag(z, z^-1)` on block `block` of `(C^2)^n`, identity elsewhere.
fn block_rotation(n: usize, block: usize, r: u32) -> ExactMatrix {
    let diag = (0..2 * n)
        .map(|i| match (i / 2 == block, i % 2) {
            (true, 0) => root(1, r),
            (true, _) => root(-1, r),
            _ => CycNum::one(r),
        })
        .collect();
    ExactMatrix::diagonal(diag).expect("uniform order")
}

fn symmetric_generators(n: usize, order: u32) -> Vec<ExactMatrix> {
    if n < 2 {
        return vec![ExactMatrix::identity(2 * n.max(1), order)];
    }
    let mut swap: Vec<usize> = (0..n).collect();
    swap.swap(0, 1);
    let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    vec![
        block_permutation(&swap, order),
        block_permutation(&cycle, order),
    ]
}

/// Number of partitions of `n` with exactly `k` parts, `counts[k]`.
fn partitions_by_length(n: usize) -> Vec<usize> {
    // p[m][k]: partitions of m into exactly k parts
    let mut p = vec![vec![0usize; n + 1]; n + 1];
    p[0][0] = 1;
    for m in 1..=n {
        for k in 1..=m {
            p[m][k] = p[m - 1][k - 1] + if m >= 2 * k { p[m - k][k] } else { 0 };
        }
    }
    p[n].clone()
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Cyclic group of order `r` in SU(2), type `A_(r-1)`.
pub fn cyclic(r: u32) -> Result<CorpusEntry> {
    if r == 0 {
        return Err(Error::UnknownCorpus("cyclic(0)".into()));
    }
    let g = ExactMatrix::diagonal(vec![root(1, r), root(-1, r)])?;
    let mut age_counts = vec![1];
    if r > 1 {
        age_counts.push(r as usize - 1);
    }
    Ok(CorpusEntry {
        name: format!("cyclic({r})"),
        spec: GroupSpec::new(2, r, vec![g], None)?,
        symplectic: true,
        expected: ExpectedFacts {
            order: r as usize,
            class_count: r as usize,
            age_counts,
        },
    })
}

/// Binary dihedral group of order `4m` in SU(2), type `D_(m+2)`.
pub fn binary_dihedral(m: u32) -> Result<CorpusEntry> {
    if m < 2 {
        return Err(Error::UnknownCorpus(format!(
            "binary_dihedral({m}): m must be at least 2"
        )));
    }
    let order = 2 * m;
    let a = ExactMatrix::diagonal(vec![root(1, order), root(-1, order)])?;
    let b = ExactMatrix::from_ints(&[&[0, 1], &[-1, 0]], order)?;
    Ok(CorpusEntry {
        name: format!("binary_dihedral({m})"),
        spec: GroupSpec::new(2, order, vec![a, b], None)?,
        symplectic: true,
        expected: ExpectedFacts {
            order: 4 * m as usize,
            class_count: m as usize + 3,
            age_counts: vec![1, m as usize + 2],
        },
    })
}

/// `S_n` permuting the factors of `(C^2)^n`.
pub fn symmetric_pairs(n: usize) -> Result<CorpusEntry> {
    if n == 0 {
        return Err(Error::UnknownCorpus("symmetric_pairs(0)".into()));
    }
    let by_len = partitions_by_length(n);
    // age = n - (number of cycles)
    let age_counts: Vec<usize> = (0..n).map(|a| by_len[n - a]).collect();
    Ok(CorpusEntry {
        name: format!("symmetric_pairs({n})"),
        spec: GroupSpec::new(2 * n, 1, symmetric_generators(n, 1), None)?,
        symplectic: true,
        expected: ExpectedFacts {
            order: factorial(n),
            class_count: by_len.iter().sum(),
            age_counts,
        },
    })
}

/// `mu_r` wreath `S_n` on `(C^2)^n`, each `mu_r` acting by `diag(z, z^-1)`.
pub fn cyclic_wreath(r: u32, n: usize) -> Result<CorpusEntry> {
    if r == 0 || n == 0 {
        return Err(Error::UnknownCorpus(format!("cyclic_wreath({r}, {n})")));
    }
    let mut gens = vec![block_rotation(n, 0, r)];
    if n >= 2 {
        gens.extend(symmetric_generators(n, r));
    }
    // Classes are r-tuples of partitions (one per cycle-product colour) of
    // total size n; the age is n minus the number of colour-0 cycles.
    let by_len_all: Vec<Vec<usize>> = (0..=n).map(partitions_by_length).collect();
    let p: Vec<usize> = by_len_all.iter().map(|v| v.iter().sum()).collect();
    // multipartitions of m into r - 1 (nonzero) colours
    let mut rest = vec![0usize; n + 1];
    rest[0] = 1;
    for _ in 1..r {
        let mut next = vec![0usize; n + 1];
        for (i, &x) in rest.iter().enumerate() {
            for (j, &pj) in p.iter().enumerate().take(n + 1 - i) {
                next[i + j] += x * pj;
            }
        }
        rest = next;
    }
    let mut age_counts = vec![0usize; n + 1];
    for k in 0..=n {
        // colour 0 uses k boxes
        for (len, &c) in by_len_all[k].iter().enumerate() {
            if c > 0 {
                age_counts[n - len] += c * rest[n - k];
            }
        }
    }
    while age_counts.last() == Some(&0) {
        age_counts.pop();
    }
    Ok(CorpusEntry {
        name: format!("cyclic_wreath({r}, {n})"),
        spec: GroupSpec::new(2 * n, r, gens, None)?,
        symplectic: true,
        expected: ExpectedFacts {
            order: (r as usize).pow(n as u32) * factorial(n),
            class_count: age_counts.iter().sum(),
            age_counts,
        },
    })
}

/// `mu_4` acting on `C^4` by the scalar `z_4`: in SL(4) but not symplectic.
pub fn mu4_counterexample() -> Result<CorpusEntry> {
    let g = ExactMatrix::scalar(4, root(1, 4));
    Ok(CorpusEntry {
        name: "mu4_counterexample".into(),
        spec: GroupSpec::new(4, 4, vec![g], None)?,
        symplectic: false,
        expected: ExpectedFacts {
            order: 4,
            class_count: 4,
            age_counts: vec![1, 1, 1, 1],
        },
    })
}

/// Resolves names such as `cyclic(5)`, `cyclic_wreath(2,3)` or `mu4_counterexample`.
pub fn lookup(name: &str) -> Result<CorpusEntry> {
    let unknown = || Error::UnknownCorpus(name.to_string());
    let compact: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    if compact == "mu4_counterexample" {
        return mu4_counterexample();
    }
    let (head, args) = compact
        .strip_suffix(')')
        .and_then(|s| s.split_once('('))
        .ok_or_else(unknown)?;
    let args: Vec<u32> = args
        .split(',')
        .map(|a| a.parse::<u32>().map_err(|_| unknown()))
        .collect::<Result<_>>()?;
    match (head, args.as_slice()) {
        ("cyclic", [r]) => cyclic(*r),
        ("binary_dihedral", [m]) => binary_dihedral(*m),
        ("symmetric_pairs", [n]) => symmetric_pairs(*n as usize),
        ("cyclic_wreath", [r, n]) => cyclic_wreath(*r, *n as usize),
        _ => Err(unknown()),
    }
}

/// The corpus exercised by the golden tests.
pub fn standard_corpus() -> Result<Vec<CorpusEntry>> {
    let mut out = vec![];
    for r in 2..=12 {
        out.push(cyclic(r)?);
    }
    for m in 2..=6 {
        out.push(binary_dihedral(m)?);
    }
    for n in 2..=5 {
        out.push(symmetric_pairs(n)?);
    }
    out.push(cyclic_wreath(2, 2)?);
    out.push(cyclic_wreath(2, 3)?);
    out.push(cyclic_wreath(3, 2)?);
    out.push(mu4_counterexample()?);
    Ok(out)
}
