//! Decorations: the signed combinatorial objects underlying the
//! fixed-point count.
//!
//! A decoration for a ψ-exponent profile crosses out the smallest point of
//! each of the first three colors, boxes the points with positive exponent,
//! fixes a monochromatic set partition of the boxed points (the hue
//! partition), assigns every remaining point a hue so that each block B is
//! the hue of exactly k_B points, and underlines the forced largest |B|−1
//! members of every block plus an arbitrary subset of the unboxed points
//! whose hue matches their own color. The sign is (−1)^{#underlines}; the
//! underline involution toggles the smallest matching unboxed point and
//! leaves exactly the mismatched decorations fixed.

use crate::graph::ColorProfile;
use crate::{invalid, Result};

/// A ψ-exponent profile: a color profile together with one nonnegative
/// exponent per marked point, in canonical layout (within each color the
/// positive exponents come first and weakly increase).
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct ExponentProfile {
    profile: ColorProfile,
    exponents: Vec<usize>,
}

impl ExponentProfile {
    /// Validates the canonical layout and the dimension constraint
    /// Σk = n − 3.
    pub fn new(profile: ColorProfile, exponents: Vec<usize>) -> Result<Self> {
        let n = profile.n();
        if exponents.len() != n {
            return Err(invalid(format!(
                "expected {n} exponents, got {}",
                exponents.len()
            )));
        }
        let total: usize = exponents.iter().sum();
        if total != n - 3 {
            return Err(invalid(format!(
                "exponents sum to {total}, expected n − 3 = {}",
                n - 3
            )));
        }
        for j in 0..profile.m() {
            let range = profile.class_range(j);
            let ks = &exponents[range];
            let ell = ks.iter().take_while(|&&k| k > 0).count();
            if ks[ell..].iter().any(|&k| k > 0) {
                return Err(invalid(format!(
                    "color {} has a positive exponent after a zero; \
                     canonical layout puts positive exponents first",
                    j + 1
                )));
            }
            if ks[..ell].windows(2).any(|w| w[0] > w[1]) {
                return Err(invalid(format!(
                    "positive exponents of color {} must be weakly increasing",
                    j + 1
                )));
            }
        }
        Ok(ExponentProfile { profile, exponents })
    }

    /// Sorts the exponents within each color into canonical layout first;
    /// point symmetry within a color leaves the integral unchanged.
    pub fn normalized(profile: ColorProfile, exponents: Vec<usize>) -> Result<Self> {
        let mut exponents = exponents;
        if exponents.len() != profile.n() {
            return Err(invalid(format!(
                "expected {} exponents, got {}",
                profile.n(),
                exponents.len()
            )));
        }
        for j in 0..profile.m() {
            let range = profile.class_range(j);
            let mut ks: Vec<usize> =
                exponents[range.clone()].iter().copied().filter(|&k| k > 0).collect();
            ks.sort_unstable();
            ks.resize(range.len(), 0);
            exponents[range].copy_from_slice(&ks);
        }
        ExponentProfile::new(profile, exponents)
    }

    pub fn profile(&self) -> &ColorProfile {
        &self.profile
    }

    pub fn exponents(&self) -> &[usize] {
        &self.exponents
    }

    pub fn n(&self) -> usize {
        self.profile.n()
    }

    pub fn exponent(&self, point: usize) -> usize {
        self.exponents[point]
    }

    pub fn is_boxed(&self, point: usize) -> bool {
        self.exponents[point] > 0
    }

    pub fn boxed_points(&self) -> Vec<usize> {
        (0..self.n()).filter(|&p| self.is_boxed(p)).collect()
    }

    /// The crossed-out points: the first point of each of the first three
    /// colors.
    pub fn crossed_points(&self) -> [usize; 3] {
        [
            self.profile.class_range(0).start,
            self.profile.class_range(1).start,
            self.profile.class_range(2).start,
        ]
    }

    pub fn is_crossed(&self, point: usize) -> bool {
        self.crossed_points().contains(&point)
    }

    /// ℓ_j: the number of distinct ψ classes of color j in the product.
    pub fn psi_count(&self, color: usize) -> usize {
        self.profile
            .class_range(color)
            .filter(|&p| self.is_boxed(p))
            .count()
    }

    /// k_{C^{(j)}}: the exponent total of color j.
    pub fn color_exponent_total(&self, color: usize) -> usize {
        self.profile
            .class_range(color)
            .map(|p| self.exponents[p])
            .sum()
    }

    /// k_S for an arbitrary point set.
    pub fn exponent_total(&self, points: &[usize]) -> usize {
        points.iter().map(|&p| self.exponents[p]).sum()
    }
}

impl std::fmt::Display for ExponentProfile {
    /// `[5,4,1] k=1:2,6:2,7:3` — sizes plus 1-indexed `point:exponent`
    /// pairs, matching the CLI syntax.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sizes: Vec<String> = self.profile.sizes().iter().map(|s| s.to_string()).collect();
        write!(f, "[{}] k=", sizes.join(","))?;
        let pairs: Vec<String> = (0..self.n())
            .filter(|&p| self.exponents[p] > 0)
            .map(|p| format!("{}:{}", p + 1, self.exponents[p]))
            .collect();
        if pairs.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", pairs.join(","))
        }
    }
}

/// All canonical exponent layouts for a color profile with Σk = n − 3,
/// in a fixed deterministic order.
pub fn canonical_exponent_vectors(profile: &ColorProfile) -> Vec<ExponentProfile> {
    let n = profile.n();
    let target = n - 3;
    let mut out = Vec::new();
    let mut exponents = vec![0usize; n];
    descend(profile, 0, target, &mut exponents, &mut out);
    return out;

    fn descend(
        profile: &ColorProfile,
        color: usize,
        remaining: usize,
        exponents: &mut Vec<usize>,
        out: &mut Vec<ExponentProfile>,
    ) {
        if color == profile.m() {
            if remaining == 0 {
                out.push(
                    ExponentProfile::new(profile.clone(), exponents.clone())
                        .expect("construction is canonical"),
                );
            }
            return;
        }
        let range = profile.class_range(color);
        // Weakly increasing positive prefixes of length ≤ r_j and sum ≤
        // remaining, including the empty prefix.
        fill(profile, color, remaining, range.start, range.end, 1, exponents, out);
    }

    #[allow(clippy::too_many_arguments)]
    fn fill(
        profile: &ColorProfile,
        color: usize,
        remaining: usize,
        pos: usize,
        end: usize,
        floor: usize,
        exponents: &mut Vec<usize>,
        out: &mut Vec<ExponentProfile>,
    ) {
        descend(profile, color + 1, remaining, exponents, out);
        if pos == end {
            return;
        }
        let mut k = floor;
        while k <= remaining {
            exponents[pos] = k;
            fill(profile, color, remaining - k, pos + 1, end, k, exponents, out);
            exponents[pos] = 0;
            k += 1;
        }
    }
}

/// A monochromatic set partition of the boxed points; each block is a hue of
/// its color.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct HuePartition {
    blocks: Vec<Vec<usize>>,
}

impl HuePartition {
    /// Validates that the blocks partition the boxed points and are each
    /// contained in one color class; stores them canonically (each block
    /// ascending, blocks ordered by minimum).
    pub fn new(e: &ExponentProfile, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut blocks = blocks;
        let mut seen = vec![false; e.n()];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(invalid("empty hue block"));
            }
            block.sort_unstable();
            let color = e.profile().color_of(block[0]);
            for &p in block.iter() {
                if !e.is_boxed(p) {
                    return Err(invalid(format!("point {} is not boxed", p + 1)));
                }
                if seen[p] {
                    return Err(invalid(format!("point {} in two hue blocks", p + 1)));
                }
                seen[p] = true;
                if e.profile().color_of(p) != color {
                    return Err(invalid("hue block spans two colors"));
                }
            }
        }
        for p in 0..e.n() {
            if e.is_boxed(p) && !seen[p] {
                return Err(invalid(format!("boxed point {} missing from hue partition", p + 1)));
            }
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(HuePartition { blocks })
    }

    /// The all-singletons partition: one hue per boxed point.
    pub fn singletons(e: &ExponentProfile) -> Self {
        HuePartition { blocks: e.boxed_points().into_iter().map(|p| vec![p]).collect() }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }
}

/// All monochromatic partitions of the boxed points, as the cross product of
/// set partitions within each color, in a fixed deterministic order.
pub fn enumerate_hue_partitions(e: &ExponentProfile) -> Vec<HuePartition> {
    let mut per_color: Vec<Vec<Vec<Vec<usize>>>> = Vec::new();
    for j in 0..e.profile().m() {
        let points: Vec<usize> = e.profile().class_range(j).filter(|&p| e.is_boxed(p)).collect();
        per_color.push(set_partitions(&points));
    }
    let mut out = Vec::new();
    let mut current: Vec<Vec<usize>> = Vec::new();
    cross(&per_color, 0, &mut current, &mut out);
    return out;

    fn cross(
        per_color: &[Vec<Vec<Vec<usize>>>],
        j: usize,
        current: &mut Vec<Vec<usize>>,
        out: &mut Vec<HuePartition>,
    ) {
        if j == per_color.len() {
            let mut blocks = current.clone();
            blocks.sort_by_key(|b| b[0]);
            out.push(HuePartition { blocks });
            return;
        }
        for partition in &per_color[j] {
            let len = current.len();
            current.extend(partition.iter().cloned());
            cross(per_color, j + 1, current, out);
            current.truncate(len);
        }
    }
}

/// All set partitions of `points` (one empty partition when empty); blocks
/// sorted ascending internally, first block holds the first point.
fn set_partitions(points: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut current: Vec<Vec<usize>> = Vec::new();
    descend(points, 0, &mut current, &mut out);
    return out;

    fn descend(
        points: &[usize],
        i: usize,
        current: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if i == points.len() {
            out.push(current.clone());
            return;
        }
        for b in 0..current.len() {
            current[b].push(points[i]);
            descend(points, i + 1, current, out);
            current[b].pop();
        }
        current.push(vec![points[i]]);
        descend(points, i + 1, current, out);
        current.pop();
    }
}

/// A decoration: hue partition, hue assignment, and underline set for a
/// ψ-exponent profile. Equality and hashing are structural over the three
/// decoration fields (profiles are implied by context).
#[derive(Clone, Debug)]
pub struct Decoration {
    e: ExponentProfile,
    partition: HuePartition,
    /// Block index per point; `None` exactly on the crossed-out points.
    hue_of: Vec<Option<usize>>,
    underlined: Vec<bool>,
}

impl PartialEq for Decoration {
    fn eq(&self, other: &Self) -> bool {
        self.partition == other.partition
            && self.hue_of == other.hue_of
            && self.underlined == other.underlined
    }
}

impl Eq for Decoration {}

impl std::hash::Hash for Decoration {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.partition.hash(state);
        self.hue_of.hash(state);
        self.underlined.hash(state);
    }
}

impl Decoration {
    /// Validates every decoration axiom: the crossed points carry no hue and
    /// everything else exactly one; each block's largest |B|−1 members have
    /// hue B and are underlined; block B is the hue of exactly k_B points;
    /// and any other underline sits on an unboxed point whose hue matches
    /// its color.
    pub fn new(
        e: ExponentProfile,
        partition: HuePartition,
        hue_of: Vec<Option<usize>>,
        underlined: Vec<bool>,
    ) -> Result<Self> {
        let n = e.n();
        if hue_of.len() != n || underlined.len() != n {
            return Err(invalid("hue and underline tables must cover every point"));
        }
        let blocks = partition.blocks();
        let mut counts = vec![0usize; blocks.len()];
        for p in 0..n {
            match hue_of[p] {
                Some(b) if e.is_crossed(p) => {
                    return Err(invalid(format!(
                        "crossed-out point {} has hue {b}",
                        p + 1
                    )))
                }
                None if !e.is_crossed(p) => {
                    return Err(invalid(format!("point {} has no hue", p + 1)))
                }
                Some(b) if b >= blocks.len() => {
                    return Err(invalid(format!("point {} has dangling hue index", p + 1)))
                }
                Some(b) => counts[b] += 1,
                None => {}
            }
        }
        for (b, block) in blocks.iter().enumerate() {
            let k_b = e.exponent_total(block);
            if counts[b] != k_b {
                return Err(invalid(format!(
                    "block {} must be the hue of exactly {k_b} points, found {}",
                    display_block(block),
                    counts[b]
                )));
            }
            for &p in &block[1..] {
                if hue_of[p] != Some(b) || !underlined[p] {
                    return Err(invalid(format!(
                        "point {} must carry hue {} and a forced underline",
                        p + 1,
                        display_block(block)
                    )));
                }
            }
        }
        let d = Decoration { e, partition, hue_of, underlined };
        for p in 0..n {
            if !d.underlined[p] {
                continue;
            }
            if d.e.is_crossed(p) {
                return Err(invalid(format!("crossed-out point {} is underlined", p + 1)));
            }
            let forced = d
                .hue_of[p]
                .is_some_and(|b| d.partition.blocks()[b].iter().skip(1).any(|&q| q == p));
            if forced {
                continue;
            }
            if d.e.is_boxed(p) {
                return Err(invalid(format!(
                    "boxed point {} may only carry a forced underline",
                    p + 1
                )));
            }
            if d.hue_color(p) != Some(d.e.profile().color_of(p)) {
                return Err(invalid(format!(
                    "underlined point {} has a hue of another color",
                    p + 1
                )));
            }
        }
        Ok(d)
    }

    /// Internal constructor for enumeration streams that produce axioms by
    /// construction.
    pub(crate) fn from_parts_unchecked(
        e: ExponentProfile,
        partition: HuePartition,
        hue_of: Vec<Option<usize>>,
        underlined: Vec<bool>,
    ) -> Self {
        Decoration { e, partition, hue_of, underlined }
    }

    pub fn exponents(&self) -> &ExponentProfile {
        &self.e
    }

    pub fn hue_partition(&self) -> &HuePartition {
        &self.partition
    }

    pub fn hue_index(&self, point: usize) -> Option<usize> {
        self.hue_of[point]
    }

    pub fn hue_block(&self, point: usize) -> Option<&[usize]> {
        self.hue_of[point].map(|b| self.partition.blocks()[b].as_slice())
    }

    /// The color whose hue this point carries, if any.
    pub fn hue_color(&self, point: usize) -> Option<usize> {
        self.hue_of[point].map(|b| self.block_color(b))
    }

    pub fn block_color(&self, block_index: usize) -> usize {
        self.e.profile().color_of(self.partition.blocks()[block_index][0])
    }

    pub fn is_underlined(&self, point: usize) -> bool {
        self.underlined[point]
    }

    pub fn underline_count(&self) -> usize {
        self.underlined.iter().filter(|&&u| u).count()
    }

    /// Points of the given block in canonical block order.
    pub fn block(&self, block_index: usize) -> &[usize] {
        &self.partition.blocks()[block_index]
    }

    pub(crate) fn replace_parts(
        &self,
        partition: HuePartition,
        hue_of: Vec<Option<usize>>,
        underlined: Vec<bool>,
    ) -> Decoration {
        Decoration { e: self.e.clone(), partition, hue_of, underlined }
    }

    /// Parses the tabular text form produced by `Display`.
    pub fn parse(e: &ExponentProfile, text: &str) -> Result<Decoration> {
        let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        let m = e.profile().m();
        if lines.len() != m {
            return Err(invalid(format!("expected {m} color rows, got {}", lines.len())));
        }
        let n = e.n();
        let mut hue_sets: Vec<Option<(usize, Vec<usize>)>> = vec![None; n];
        let mut underlined = vec![false; n];
        for (j, line) in lines.iter().enumerate() {
            let Some((head, rest)) = line.split_once('|') else {
                return Err(invalid(format!("row {j} is missing the `|` separator")));
            };
            if head.trim() != format!("C{}", j + 1) {
                return Err(invalid(format!("row {j} must start with C{}", j + 1)));
            }
            let mut expected: Vec<usize> = e.profile().class_range(j).collect();
            expected.reverse();
            for token in rest.split_whitespace() {
                let Some(point) = expected.pop() else {
                    return Err(invalid(format!("too many tokens in row C{}", j + 1)));
                };
                parse_token(e, token, point, &mut hue_sets, &mut underlined)?;
            }
            if !expected.is_empty() {
                return Err(invalid(format!("too few tokens in row C{}", j + 1)));
            }
        }
        // Rebuild the partition from the hue labels: every block is the hue
        // of at least one point because k_B ≥ |B| ≥ 1.
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for entry in hue_sets.iter().flatten() {
            if !blocks.contains(&entry.1) {
                blocks.push(entry.1.clone());
            }
        }
        let partition = HuePartition::new(e, blocks)?;
        let mut hue_of: Vec<Option<usize>> = vec![None; n];
        for (p, entry) in hue_sets.iter().enumerate() {
            if let Some((color, set)) = entry {
                let idx = partition
                    .blocks()
                    .iter()
                    .position(|b| b == set)
                    .expect("partition was built from these sets");
                if e.profile().color_of(set[0]) != *color {
                    return Err(invalid(format!(
                        "hue color label on point {} does not match its block",
                        p + 1
                    )));
                }
                hue_of[p] = Some(idx);
            }
        }
        Decoration::new(e.clone(), partition, hue_of, underlined)
    }
}

fn display_block(block: &[usize]) -> String {
    let parts: Vec<String> = block.iter().map(|&p| (p + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn parse_token(
    e: &ExponentProfile,
    token: &str,
    point: usize,
    hue_sets: &mut [Option<(usize, Vec<usize>)>],
    underlined: &mut [bool],
) -> Result<()> {
    let mut t = token;
    let boxed = t.starts_with('[');
    if boxed {
        t = t
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| invalid(format!("unbalanced brackets in `{token}`")))?;
    }
    if boxed != e.is_boxed(point) {
        return Err(invalid(format!("boxing marker on `{token}` contradicts the exponents")));
    }
    if let Some(rest) = t.strip_prefix('_') {
        underlined[point] = true;
        t = rest;
    }
    let crossed = t.starts_with('x');
    if crossed {
        t = &t[1..];
        if underlined[point] {
            return Err(invalid(format!("crossed-out token `{token}` cannot be underlined")));
        }
    }
    if crossed != e.is_crossed(point) {
        return Err(invalid(format!("cross marker on `{token}` contradicts the profile")));
    }
    let (num_text, hue_text) = match t.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (t, None),
    };
    let num: usize = num_text
        .parse()
        .map_err(|_| invalid(format!("bad point number in `{token}`")))?;
    if num != point + 1 {
        return Err(invalid(format!("expected point {} but token says {num}", point + 1)));
    }
    match hue_text {
        None if crossed => Ok(()),
        None => Err(invalid(format!("point {} is missing its hue", point + 1))),
        Some(_) if crossed => Err(invalid(format!("crossed-out point {num} cannot have a hue"))),
        Some(h) => {
            let (color_text, set_text) = h
                .split_once('{')
                .ok_or_else(|| invalid(format!("bad hue syntax in `{token}`")))?;
            let color: usize = color_text
                .strip_prefix('C')
                .and_then(|c| c.parse().ok())
                .ok_or_else(|| invalid(format!("bad hue color in `{token}`")))?;
            let set_text = set_text
                .strip_suffix('}')
                .ok_or_else(|| invalid(format!("unclosed hue block in `{token}`")))?;
            let mut set = Vec::new();
            for part in set_text.split(',') {
                let v: usize = part
                    .trim()
                    .parse()
                    .map_err(|_| invalid(format!("bad hue member in `{token}`")))?;
                if v == 0 || v > e.n() {
                    return Err(invalid(format!("hue member {v} out of range")));
                }
                set.push(v - 1);
            }
            set.sort_unstable();
            if color == 0 || color > e.profile().m() {
                return Err(invalid(format!("hue color C{color} out of range")));
            }
            hue_sets[point] = Some((color - 1, set));
            Ok(())
        }
    }
}

impl std::fmt::Display for Decoration {
    /// One row per color: `C1 | [x1] [2:C2{7}] [_3:C1{1,3}] 4:C5{18,19} …`
    /// with 1-indexed points, `[...]` for boxed, `x` for crossed out, `_`
    /// for underlined, and `:C<j>{...}` naming the hue.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for j in 0..self.e.profile().m() {
            if j > 0 {
                writeln!(f)?;
            }
            write!(f, "C{} |", j + 1)?;
            for p in self.e.profile().class_range(j) {
                let mut token = String::new();
                if self.underlined[p] {
                    token.push('_');
                }
                if self.e.is_crossed(p) {
                    token.push('x');
                }
                token.push_str(&(p + 1).to_string());
                if let Some(b) = self.hue_of[p] {
                    token.push_str(&format!(
                        ":C{}{}",
                        self.block_color(b) + 1,
                        display_block(self.block(b))
                    ));
                }
                if self.e.is_boxed(p) {
                    token = format!("[{token}]");
                }
                write!(f, " {token}")?;
            }
        }
        Ok(())
    }
}

/// (−1)^{u(D)}.
pub fn decoration_sign(d: &Decoration) -> i64 {
    if d.underline_count() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Toggles the underline on the smallest unboxed point whose hue matches its
/// color; the identity exactly on mismatched decorations.
pub fn underline_involution(d: &Decoration) -> Decoration {
    let target = (0..d.e.n()).find(|&p| {
        !d.e.is_boxed(p)
            && !d.e.is_crossed(p)
            && d.hue_color(p) == Some(d.e.profile().color_of(p))
    });
    let Some(p) = target else {
        return d.clone();
    };
    let mut underlined = d.underlined.clone();
    underlined[p] = !underlined[p];
    d.replace_parts(d.partition.clone(), d.hue_of.clone(), underlined)
}

/// True iff every unboxed point's hue fails to match its own color.
pub fn is_mismatched(d: &Decoration) -> bool {
    (0..d.e.n()).all(|p| {
        d.e.is_boxed(p)
            || d.e.is_crossed(p)
            || d.hue_color(p) != Some(d.e.profile().color_of(p))
    })
}

/// Visits every decoration for the profile exactly once: hue partitions,
/// then hue assignments, then optional underline subsets.
pub fn for_each_decoration(e: &ExponentProfile, mut visit: impl FnMut(&Decoration)) {
    for partition in enumerate_hue_partitions(e) {
        assign_hues(e, &partition, false, &mut |hue_of, forced| {
            let matching: Vec<usize> = (0..e.n())
                .filter(|&p| {
                    !e.is_boxed(p)
                        && !e.is_crossed(p)
                        && hue_of[p].is_some_and(|b| {
                            e.profile().color_of(partition.blocks()[b][0])
                                == e.profile().color_of(p)
                        })
                })
                .collect();
            for mask in 0u64..1 << matching.len() {
                let mut underlined = forced.to_vec();
                for (i, &p) in matching.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        underlined[p] = true;
                    }
                }
                let d = Decoration::from_parts_unchecked(
                    e.clone(),
                    partition.clone(),
                    hue_of.to_vec(),
                    underlined,
                );
                visit(&d);
            }
        });
    }
}

/// All decorations, collected.
pub fn enumerate_decorations(e: &ExponentProfile) -> Vec<Decoration> {
    let mut out = Vec::new();
    for_each_decoration(e, |d| out.push(d.clone()));
    out
}

/// Visits every mismatched decoration exactly once (underlines are exactly
/// the forced ones, because no unboxed point may carry a matching hue).
pub fn for_each_mismatched(e: &ExponentProfile, mut visit: impl FnMut(&Decoration)) {
    for partition in enumerate_hue_partitions(e) {
        assign_hues(e, &partition, true, &mut |hue_of, forced| {
            let d = Decoration::from_parts_unchecked(
                e.clone(),
                partition.clone(),
                hue_of.to_vec(),
                forced.to_vec(),
            );
            visit(&d);
        });
    }
}

/// Core assignment recursion: fixes the forced hues/underlines of each
/// block, then hands every completion of the free points to `emit`. With
/// `mismatched_only`, unboxed points skip blocks of their own color.
pub(crate) fn assign_hues(
    e: &ExponentProfile,
    partition: &HuePartition,
    mismatched_only: bool,
    emit: &mut impl FnMut(&[Option<usize>], &[bool]),
) {
    let n = e.n();
    let blocks = partition.blocks();
    let mut hue_of: Vec<Option<usize>> = vec![None; n];
    let mut forced = vec![false; n];
    let mut capacity = Vec::with_capacity(blocks.len());
    for (b, block) in blocks.iter().enumerate() {
        let k_b = e.exponent_total(block);
        if k_b + 1 < block.len() {
            // Fewer hue slots than forced members: no decorations at all.
            return;
        }
        capacity.push(k_b - (block.len() - 1));
        for &p in &block[1..] {
            hue_of[p] = Some(b);
            forced[p] = true;
        }
    }
    let pool: Vec<usize> = (0..n).filter(|&p| !e.is_crossed(p) && hue_of[p].is_none()).collect();
    let colors: Vec<usize> = (0..n).map(|p| e.profile().color_of(p)).collect();
    let block_colors: Vec<usize> = blocks.iter().map(|b| colors[b[0]]).collect();
    descend(e, &pool, 0, &colors, &block_colors, mismatched_only, &mut capacity, &mut hue_of, &forced, emit);

    #[allow(clippy::too_many_arguments)]
    fn descend(
        e: &ExponentProfile,
        pool: &[usize],
        i: usize,
        colors: &[usize],
        block_colors: &[usize],
        mismatched_only: bool,
        capacity: &mut Vec<usize>,
        hue_of: &mut Vec<Option<usize>>,
        forced: &[bool],
        emit: &mut impl FnMut(&[Option<usize>], &[bool]),
    ) {
        if i == pool.len() {
            emit(hue_of, forced);
            return;
        }
        let p = pool[i];
        for b in 0..capacity.len() {
            if capacity[b] == 0 {
                continue;
            }
            if mismatched_only && !e.is_boxed(p) && block_colors[b] == colors[p] {
                continue;
            }
            capacity[b] -= 1;
            hue_of[p] = Some(b);
            descend(e, pool, i + 1, colors, block_colors, mismatched_only, capacity, hue_of, forced, emit);
            hue_of[p] = None;
            capacity[b] += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(sizes: &[usize]) -> ColorProfile {
        ColorProfile::new(sizes.to_vec()).unwrap()
    }

    /// ψ₁²ψ₂³ψ₃⁵·ψ₇⁴·ψ₁₈ψ₁₉ on colors [6,5,4,2,2].
    fn running_profile() -> ExponentProfile {
        let mut k = vec![0usize; 19];
        k[0] = 2;
        k[1] = 3;
        k[2] = 5;
        k[6] = 4;
        k[17] = 1;
        k[18] = 1;
        ExponentProfile::new(profile(&[6, 5, 4, 2, 2]), k).unwrap()
    }

    /// The displayed sample decoration for the running product: hue
    /// partition {1,3},{2},{7},{18,19}; underlines at 3, 6, 9, 11, 19.
    fn running_decoration() -> Decoration {
        let e = running_profile();
        let partition = HuePartition::new(
            &e,
            vec![vec![0, 2], vec![1], vec![6], vec![17, 18]],
        )
        .unwrap();
        // Blocks sort to: 0 = {1,3}, 1 = {2}, 2 = {7}, 3 = {18,19}.
        let hue = |spec: &[(usize, usize)]| {
            let mut hue_of = vec![None; 19];
            for &(p, b) in spec {
                hue_of[p - 1] = Some(b);
            }
            hue_of
        };
        let hue_of = hue(&[
            (2, 2),
            (3, 0),
            (4, 3),
            (5, 0),
            (6, 1),
            (8, 0),
            (9, 2),
            (10, 0),
            (11, 2),
            (13, 1),
            (14, 2),
            (15, 0),
            (16, 1),
            (17, 0),
            (18, 0),
            (19, 3),
        ]);
        let mut underlined = vec![false; 19];
        for p in [3, 6, 9, 11, 19] {
            underlined[p - 1] = true;
        }
        Decoration::new(e, partition, hue_of, underlined).unwrap()
    }

    #[test]
    fn profile_validation_and_normalization() {
        let p = profile(&[5, 4, 1]);
        let mut k = vec![0usize; 10];
        k[0] = 2;
        k[5] = 2;
        k[6] = 3;
        assert!(ExponentProfile::new(p.clone(), k.clone()).is_ok());

        // Positive after zero within a color is not canonical.
        let mut bad = vec![0usize; 10];
        bad[1] = 2;
        bad[5] = 2;
        bad[6] = 3;
        assert!(ExponentProfile::new(p.clone(), bad.clone()).is_err());
        let fixed = ExponentProfile::normalized(p.clone(), bad).unwrap();
        assert_eq!(fixed.exponents()[..2], [2, 0]);

        // Decreasing positive prefix is not canonical either.
        let mut dec = vec![0usize; 10];
        dec[0] = 3;
        dec[1] = 2;
        dec[5] = 2;
        assert!(ExponentProfile::new(p.clone(), dec.clone()).is_err());
        let fixed = ExponentProfile::normalized(p.clone(), dec).unwrap();
        assert_eq!(fixed.exponents()[..2], [2, 3]);

        // Wrong total.
        let mut short = vec![0usize; 10];
        short[0] = 1;
        assert!(ExponentProfile::new(p, short).is_err());
    }

    #[test]
    fn profile_accessors() {
        let e = running_profile();
        assert_eq!(e.n(), 19);
        assert_eq!(e.boxed_points(), vec![0, 1, 2, 6, 17, 18]);
        assert_eq!(e.crossed_points(), [0, 6, 11]);
        assert_eq!(e.psi_count(0), 3);
        assert_eq!(e.psi_count(1), 1);
        assert_eq!(e.psi_count(2), 0);
        assert_eq!(e.color_exponent_total(0), 10);
        assert_eq!(e.color_exponent_total(4), 2);
        assert_eq!(e.to_string(), "[6,5,4,2,2] k=1:2,2:3,3:5,7:4,18:1,19:1");
    }

    #[test]
    fn canonical_vector_enumeration() {
        // A point: only the empty product.
        assert_eq!(canonical_exponent_vectors(&profile(&[1, 1, 1])).len(), 1);
        // n = 4: one unit of exponent on any of three color classes; within
        // the first color it must sit on the first point.
        let vecs = canonical_exponent_vectors(&profile(&[2, 1, 1]));
        assert_eq!(vecs.len(), 3);
        for e in &vecs {
            assert_eq!(e.exponents().iter().sum::<usize>(), 1);
        }
        // Exhaustive check of canonicity for a bigger profile.
        for e in canonical_exponent_vectors(&profile(&[3, 2, 2])) {
            let again =
                ExponentProfile::new(e.profile().clone(), e.exponents().to_vec());
            assert!(again.is_ok());
        }
    }

    #[test]
    fn hue_partition_validation() {
        let e = running_profile();
        assert!(HuePartition::new(&e, vec![vec![0, 2], vec![1], vec![6], vec![17, 18]]).is_ok());
        // Missing a boxed point.
        assert!(HuePartition::new(&e, vec![vec![0, 2], vec![1], vec![6], vec![17]]).is_err());
        // Cross-color block.
        assert!(HuePartition::new(&e, vec![vec![0, 6], vec![1], vec![2], vec![17, 18]]).is_err());
        // Unboxed member.
        assert!(HuePartition::new(
            &e,
            vec![vec![0, 3], vec![1], vec![2], vec![6], vec![17, 18]]
        )
        .is_err());
        assert_eq!(HuePartition::singletons(&e).blocks().len(), 6);
    }

    #[test]
    fn partition_enumeration_counts() {
        // Boxed {1,2,3} in one color: Bell(3) = 5 partitions; boxed {7}
        // alone: 1; product with the {18,19} pair color: Bell(2) = 2.
        let e = running_profile();
        assert_eq!(enumerate_hue_partitions(&e).len(), 5 * 1 * 2);
    }

    #[test]
    fn running_example_structure() {
        let d = running_decoration();
        assert_eq!(d.underline_count(), 5);
        assert_eq!(decoration_sign(&d), -1);
        assert!(!is_mismatched(&d));
        // Forced underlines: 3 in {1,3} and 19 in {18,19}.
        assert!(d.is_underlined(2) && d.is_underlined(18));
        // Block {1,3} is the hue of k = 2+5 = 7 points.
        let b13 = d.hue_index(2).unwrap();
        let count = (0..19).filter(|&p| d.hue_index(p) == Some(b13)).count();
        assert_eq!(count, 7);
    }

    #[test]
    fn running_example_display_round_trip() {
        let d = running_decoration();
        let text = d.to_string();
        assert_eq!(
            text,
            "C1 | [x1] [2:C2{7}] [_3:C1{1,3}] 4:C5{18,19} 5:C1{1,3} _6:C1{2}\n\
             C2 | [x7] 8:C1{1,3} _9:C2{7} 10:C1{1,3} _11:C2{7}\n\
             C3 | x12 13:C1{2} 14:C2{7} 15:C1{1,3}\n\
             C4 | 16:C1{2} 17:C1{1,3}\n\
             C5 | [18:C1{1,3}] [_19:C5{18,19}]"
        );
        let parsed = Decoration::parse(&running_profile(), &text).unwrap();
        assert_eq!(parsed, d);
    }

    #[test]
    fn underline_involution_toggles_smallest_matching() {
        let d = running_decoration();
        // Matching unboxed points are 5, 6, 9, 11; the smallest, 5, is not
        // underlined yet.
        let image = underline_involution(&d);
        assert!(image.is_underlined(4));
        assert_eq!(image.underline_count(), 6);
        assert_eq!(decoration_sign(&image), -decoration_sign(&d));
        assert_eq!(underline_involution(&image), d);
    }

    #[test]
    fn validation_rejects_broken_objects() {
        let d = running_decoration();
        let e = running_profile();
        // Missing forced underline on 3.
        let mut u = vec![false; 19];
        for p in [6, 9, 11, 19] {
            u[p - 1] = true;
        }
        assert!(Decoration::new(
            e.clone(),
            d.hue_partition().clone(),
            (0..19).map(|p| d.hue_index(p)).collect(),
            u
        )
        .is_err());
        // Underline on a mismatched unboxed point (4 has hue C5).
        let mut u = vec![false; 19];
        for p in [3, 4, 19] {
            u[p - 1] = true;
        }
        assert!(Decoration::new(
            e.clone(),
            d.hue_partition().clone(),
            (0..19).map(|p| d.hue_index(p)).collect(),
            u
        )
        .is_err());
        // Wrong hue count: move one {1,3} hue over to {2}.
        let mut hue_of: Vec<Option<usize>> = (0..19).map(|p| d.hue_index(p)).collect();
        hue_of[16] = Some(1);
        assert!(Decoration::new(
            e,
            d.hue_partition().clone(),
            hue_of,
            (0..19).map(|p| d.is_underlined(p)).collect()
        )
        .is_err());
    }

    #[test]
    fn tiny_profiles_enumerate_correctly() {
        // A point: exactly one (empty) decoration of sign +1.
        let e = ExponentProfile::new(profile(&[1, 1, 1]), vec![0, 0, 0]).unwrap();
        let all = enumerate_decorations(&e);
        assert_eq!(all.len(), 1);
        assert_eq!(decoration_sign(&all[0]), 1);
        assert!(is_mismatched(&all[0]));

        // M₀,₅ with ψ₁²: the two free points must both take hue {1}.
        let e =
            ExponentProfile::new(profile(&[1, 1, 1, 1, 1]), vec![2, 0, 0, 0, 0]).unwrap();
        let all = enumerate_decorations(&e);
        assert_eq!(all.len(), 1);
        assert!(is_mismatched(&all[0]));

        // M₀,₄ with ψ₁: one decoration.
        let e = ExponentProfile::new(profile(&[1, 1, 1, 1]), vec![1, 0, 0, 0]).unwrap();
        assert_eq!(enumerate_decorations(&e).len(), 1);
    }

    /// The signed decoration sum collapses onto the mismatched count, and
    /// mismatched decorations are exactly the underline-involution fixed
    /// points.
    #[test]
    fn underline_involution_collapses_signed_sum() {
        for (sizes, ks) in [
            (vec![2, 2, 1], vec![1, 0, 1, 0, 0]),
            (vec![3, 1, 1], vec![1, 1, 0, 0, 0]),
            (vec![2, 1, 1, 1], vec![2, 0, 0, 0, 0]),
            (vec![1, 2, 2], vec![1, 1, 0, 0, 0]),
        ] {
            let e = ExponentProfile::new(profile(&sizes), ks).unwrap();
            let mut signed = 0i64;
            let mut mismatched = 0i64;
            let mut seen = std::collections::HashSet::new();
            for_each_decoration(&e, |d| {
                assert!(seen.insert(d.clone()), "stream repeated a decoration");
                signed += decoration_sign(d);
                let image = underline_involution(d);
                assert_eq!(underline_involution(&image), *d);
                if is_mismatched(d) {
                    mismatched += decoration_sign(d);
                    assert_eq!(image, *d);
                } else {
                    assert_ne!(image, *d);
                    assert_eq!(decoration_sign(&image), -decoration_sign(d));
                }
            });
            let mut mismatched_stream = 0i64;
            for_each_mismatched(&e, |d| {
                assert!(is_mismatched(d));
                mismatched_stream += decoration_sign(d);
            });
            assert_eq!(signed, mismatched);
            assert_eq!(mismatched, mismatched_stream);
        }
    }

    /// Every emitted decoration passes full validation.
    #[test]
    fn streams_emit_valid_decorations() {
        let e = ExponentProfile::new(profile(&[2, 2, 1]), vec![1, 0, 1, 0, 0]).unwrap();
        let mut total = 0usize;
        for_each_decoration(&e, |d| {
            total += 1;
            Decoration::new(
                d.exponents().clone(),
                d.hue_partition().clone(),
                (0..e.n()).map(|p| d.hue_index(p)).collect(),
                (0..e.n()).map(|p| d.is_underlined(p)).collect(),
            )
            .expect("stream produced an invalid decoration");
        });
        assert!(total > 0);
    }
}
