use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{BidLevel, ConferenceDataset, DatasetBuilder, Pair};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// On-disk dataset formats.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DatasetFormat {
    /// Flat `kind,reviewer,paper[,value]` rows.
    CsvTriplets,
    /// PrefLib categorical (`.cat`) export.
    PreflibCategorical,
    /// Full JSON dump written by [`save_json`].
    Json,
}

impl FromStr for DatasetFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" | "csv-triplets" => Ok(DatasetFormat::CsvTriplets),
            "preflib" | "preflib-categorical" | "cat" => Ok(DatasetFormat::PreflibCategorical),
            "json" => Ok(DatasetFormat::Json),
            other => Err(Error::config(format!("unknown dataset format `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct LoadOptions {
    /// Drop bids that land on conflicted pairs instead of failing. Graded
    /// exports that contain bids on self-authored papers need this.
    pub drop_conflicted_bids: bool,
}

#[derive(Clone, Debug)]
pub struct Loaded {
    pub dataset: ConferenceDataset,
    /// Bids removed because they were placed on conflicted pairs.
    pub discarded_bids: usize,
}

/// Strict load: any invariant violation is an error naming the offending pair.
pub fn load_dataset(path: &Path, format: DatasetFormat) -> Result<ConferenceDataset> {
    load_dataset_with(path, format, &LoadOptions::default()).map(|l| l.dataset)
}

pub fn load_dataset_with(path: &Path, format: DatasetFormat, opts: &LoadOptions) -> Result<Loaded> {
    let mut builder = match format {
        DatasetFormat::CsvTriplets => read_csv(path)?,
        DatasetFormat::PreflibCategorical => read_preflib(path)?,
        DatasetFormat::Json => {
            let doc: DatasetDoc = serde_json::from_reader(BufReader::new(File::open(path)?))?;
            return doc.into_dataset().map(|dataset| Loaded {
                dataset,
                discarded_bids: 0,
            });
        }
    };
    let mut discarded_bids = 0;
    if opts.drop_conflicted_bids {
        let conflicts = builder.conflict_set().clone();
        let bids = builder.bids_mut();
        let before = bids.len();
        bids.retain(|pair, _| !conflicts.contains(pair));
        discarded_bids = before - bids.len();
    }
    Ok(Loaded {
        dataset: builder.build()?,
        discarded_bids,
    })
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn read_csv(path: &Path) -> Result<DatasetBuilder> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)?;
    let mut b = DatasetBuilder::default();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        let line = rec.position().map_or(i + 1, |p| p.line() as usize);
        let field = |j: usize| rec.get(j).unwrap_or("");
        let kind = field(0).to_ascii_lowercase();
        if i == 0 && kind == "kind" {
            continue;
        }
        let (r, p, value) = (field(1), field(2), field(3));
        let need = |what: &str, s: &str| -> Result<()> {
            if s.is_empty() {
                Err(parse_err(path, line, format!("`{kind}` row is missing its {what}")))
            } else {
                Ok(())
            }
        };
        match kind.as_str() {
            "bid" => {
                need("reviewer", r)?;
                need("paper", p)?;
                let level = if value.is_empty() {
                    BidLevel::YES
                } else {
                    let raw: u8 = value
                        .parse()
                        .map_err(|_| parse_err(path, line, format!("bad bid level `{value}`")))?;
                    BidLevel(raw)
                };
                // a zero level is an explicit "no bid"
                if level.is_positive() {
                    b.bid(r, p, level);
                } else {
                    b.reviewer(r);
                    b.paper(p);
                }
            }
            "author" => {
                need("reviewer", r)?;
                need("paper", p)?;
                b.author(r, p);
            }
            "conflict" => {
                need("reviewer", r)?;
                need("paper", p)?;
                b.conflict(r, p);
            }
            "textsim" => {
                need("reviewer", r)?;
                need("paper", p)?;
                let v: f64 = value
                    .parse()
                    .map_err(|_| parse_err(path, line, format!("bad text similarity `{value}`")))?;
                b.text_sim(r, p, v);
            }
            "reviewer" => {
                need("reviewer", r)?;
                b.reviewer(r);
            }
            "paper" => {
                need("paper", p)?;
                b.paper(p);
            }
            other => return Err(parse_err(path, line, format!("unknown row kind `{other}`"))),
        }
    }
    Ok(b)
}

/// Writes the CSV triplet form. Entity declaration rows come first so that
/// reviewers and papers without any pair survive a round trip; conflicts that
/// are authorships are implied by the `author` row.
pub fn save_csv(ds: &ConferenceDataset, path: &Path) -> Result<()> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_path(path)?;
    w.write_record(["kind", "reviewer", "paper", "value"])?;
    for r in ds.reviewers() {
        w.write_record(["reviewer", r.as_str(), "", ""])?;
    }
    for p in ds.papers() {
        w.write_record(["paper", "", p.as_str(), ""])?;
    }
    for (&(r, p), level) in ds.bids() {
        w.write_record(["bid", ds.reviewer_name(r), ds.paper_name(p), &level.to_string()])?;
    }
    for &(r, p) in ds.authorships() {
        w.write_record(["author", ds.reviewer_name(r), ds.paper_name(p), ""])?;
    }
    for &(r, p) in ds.conflicts().difference(ds.authorships()) {
        w.write_record(["conflict", ds.reviewer_name(r), ds.paper_name(p), ""])?;
    }
    if let Some(t) = ds.text_sim() {
        for r in 0..ds.n_reviewers() {
            for p in 0..ds.n_papers() {
                w.write_record([
                    "textsim",
                    ds.reviewer_name(r),
                    ds.paper_name(p),
                    &t.get(r, p).to_string(),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct DatasetDoc {
    reviewers: Vec<String>,
    papers: Vec<String>,
    bids: Vec<(String, String, u8)>,
    authorships: Vec<(String, String)>,
    conflicts: Vec<(String, String)>,
    text_sim: Option<Vec<Vec<f64>>>,
}

impl DatasetDoc {
    fn from_dataset(ds: &ConferenceDataset) -> Self {
        let names = |&(r, p): &Pair| (ds.reviewer_name(r).to_owned(), ds.paper_name(p).to_owned());
        DatasetDoc {
            reviewers: ds.reviewers().iter().cloned().collect(),
            papers: ds.papers().iter().cloned().collect(),
            bids: ds
                .bids()
                .iter()
                .map(|(pair, l)| {
                    let (r, p) = names(pair);
                    (r, p, l.0)
                })
                .collect(),
            authorships: ds.authorships().iter().map(names).collect(),
            conflicts: ds.conflicts().iter().map(names).collect(),
            text_sim: ds.text_sim().map(Matrix::to_rows),
        }
    }

    fn into_dataset(self) -> Result<ConferenceDataset> {
        let reviewers: indexmap::IndexSet<String> = self.reviewers.into_iter().collect();
        let papers: indexmap::IndexSet<String> = self.papers.into_iter().collect();
        let pair = |r: &str, p: &str| -> Result<Pair> {
            let ri = reviewers.get_index_of(r).ok_or_else(|| Error::UnknownId {
                kind: "reviewer",
                name: r.to_owned(),
            })?;
            let pi = papers.get_index_of(p).ok_or_else(|| Error::UnknownId {
                kind: "paper",
                name: p.to_owned(),
            })?;
            Ok((ri, pi))
        };
        let mut bids = BTreeMap::new();
        for (r, p, l) in &self.bids {
            bids.insert(pair(r, p)?, BidLevel(*l));
        }
        let authorships = self
            .authorships
            .iter()
            .map(|(r, p)| pair(r, p))
            .collect::<Result<BTreeSet<_>>>()?;
        let conflicts = self
            .conflicts
            .iter()
            .map(|(r, p)| pair(r, p))
            .collect::<Result<BTreeSet<_>>>()?;
        let text_sim = self.text_sim.as_deref().map(Matrix::from_rows);
        ConferenceDataset::from_parts(reviewers, papers, bids, authorships, conflicts, text_sim)
    }
}

pub fn save_json(ds: &ConferenceDataset, path: &Path) -> Result<()> {
    let mut f = std::io::BufWriter::new(File::create(path)?);
    serde_json::to_writer(&mut f, &DatasetDoc::from_dataset(ds))?;
    f.flush()?;
    Ok(())
}

/// What a PrefLib category contributes to the dataset.
#[derive(Clone, Copy, Debug, PartialEq)]
enum CategoryRole {
    Bid(BidLevel),
    Conflict,
    Ignore,
}

fn category_role(name: &str) -> CategoryRole {
    match name.trim().to_ascii_lowercase().as_str() {
        "yes" => CategoryRole::Bid(BidLevel::YES),
        "maybe" => CategoryRole::Bid(BidLevel::MAYBE),
        "conflict" => CategoryRole::Conflict,
        _ => CategoryRole::Ignore,
    }
}

/// Splits `{1,2},3,{}` into `["1,2", "3", ""]`.
fn split_categories(s: &str) -> std::result::Result<Vec<String>, String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0;
    for ch in s.chars() {
        match ch {
            '{' if depth == 0 => depth = 1,
            '{' => return Err("nested braces".into()),
            '}' if depth == 1 => depth = 0,
            '}' => return Err("unbalanced `}`".into()),
            ',' if depth == 0 => out.push(std::mem::take(&mut cur)),
            c if !c.is_whitespace() => cur.push(c),
            _ => {}
        }
    }
    if depth != 0 {
        return Err("unbalanced `{`".into());
    }
    out.push(cur);
    Ok(out)
}

/// Reads a PrefLib categorical file. Each data line `count: c1, c2, ...`
/// stands for `count` voters (reviewers, named `v1`, `v2`, ...) whose
/// alternatives (papers, named `p<number>`) are grouped into categories.
/// "Yes"/"Maybe" become bids and "Conflict" becomes a conflict; any other
/// category is ignored.
fn read_preflib(path: &Path) -> Result<DatasetBuilder> {
    let reader = BufReader::new(File::open(path)?);
    let mut roles: BTreeMap<usize, CategoryRole> = BTreeMap::new();
    let mut n_alternatives = None;
    let mut b = DatasetBuilder::default();
    let mut voter = 0usize;
    let mut declared = false;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(meta) = line.strip_prefix('#') {
            let Some((key, value)) = meta.split_once(':') else {
                continue;
            };
            let key = key.trim().to_ascii_uppercase();
            if key == "NUMBER ALTERNATIVES" {
                n_alternatives = Some(value.trim().parse::<usize>().map_err(|_| {
                    parse_err(path, lineno, format!("bad alternative count `{}`", value.trim()))
                })?);
            } else if let Some(idx) = key.strip_prefix("CATEGORY NAME") {
                let idx: usize = idx
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(path, lineno, "bad category number"))?;
                roles.insert(idx, category_role(value));
            }
            continue;
        }
        if !declared {
            if let Some(n) = n_alternatives {
                for a in 1..=n {
                    b.paper(&format!("p{a}"));
                }
            }
            if roles.is_empty() {
                return Err(parse_err(path, lineno, "no `CATEGORY NAME` header lines before data"));
            }
            declared = true;
        }
        let (count, body) = line
            .split_once(':')
            .ok_or_else(|| parse_err(path, lineno, "expected `count: categories`"))?;
        let count: usize = count
            .trim()
            .parse()
            .map_err(|_| parse_err(path, lineno, format!("bad multiplicity `{}`", count.trim())))?;
        let cats = split_categories(body).map_err(|m| parse_err(path, lineno, m))?;
        let mut groups: Vec<(CategoryRole, Vec<usize>)> = Vec::with_capacity(cats.len());
        for (ci, cat) in cats.iter().enumerate() {
            let role = roles.get(&(ci + 1)).copied().unwrap_or(CategoryRole::Ignore);
            let mut alts = Vec::new();
            for tok in cat.split(',').filter(|t| !t.is_empty()) {
                let a: usize = tok
                    .parse()
                    .map_err(|_| parse_err(path, lineno, format!("bad alternative `{tok}`")))?;
                if a == 0 || n_alternatives.is_some_and(|n| a > n) {
                    return Err(parse_err(path, lineno, format!("alternative {a} out of range")));
                }
                alts.push(a);
            }
            groups.push((role, alts));
        }
        for _ in 0..count {
            voter += 1;
            let name = format!("v{voter}");
            b.reviewer(&name);
            for (role, alts) in &groups {
                for &a in alts {
                    let paper = format!("p{a}");
                    match role {
                        CategoryRole::Bid(level) => {
                            b.bid(&name, &paper, *level);
                        }
                        CategoryRole::Conflict => {
                            b.conflict(&name, &paper);
                        }
                        CategoryRole::Ignore => {
                            b.paper(&paper);
                        }
                    }
                }
            }
        }
    }
    Ok(b)
}
