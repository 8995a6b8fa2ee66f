//! Interchange formats: JSON encodings of spaces, schemes, valued trees,
//! and paths, with rationals rendered as strings ("3/2", "2", "inf").
//!
//! Printing is canonical: field order is fixed, output is compact, and
//! parsing a printed form reproduces the original value exactly (for
//! trees, the printed text; node numbering is not part of the format).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::path::{path_from_slim, AlphaPath, PathError};
use crate::rat::{ExtRat, Rat};
use crate::space::{Ball, Space, SpaceError};
use crate::tree::{Degree, SchemeError, SchemeNode, TreeError, TreeScheme, ValuedTree};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error("degree must be an integer or \"unbounded\", got \"{0}\"")]
    BadDegree(String),
    #[error("{0} is not a ball of the space")]
    NotABall(String),
}

fn to_text<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("interchange values serialize")
}

#[derive(Serialize, Deserialize)]
struct SpaceDto {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    dist: Vec<Vec<Rat>>,
}

pub fn parse_space(text: &str) -> Result<Space, JsonError> {
    let dto: SpaceDto = serde_json::from_str(text)?;
    Ok(Space::new(dto.dist, dto.labels)?)
}

pub fn print_space(space: &Space) -> String {
    to_text(&SpaceDto { labels: Some(space.labels().to_vec()), dist: space.matrix() })
}

/// Parses the space format without the ultrametric gate, for commands
/// that accept arbitrary metrics.
pub fn parse_matrix(text: &str) -> Result<(Vec<Vec<Rat>>, Option<Vec<String>>), JsonError> {
    let dto: SpaceDto = serde_json::from_str(text)?;
    Ok((dto.dist, dto.labels))
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum DegreeDto {
    Finite(u32),
    Marker(String),
}

#[derive(Serialize, Deserialize)]
struct SchemeDto {
    diam: Rat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    degree: Option<DegreeDto>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    children: Vec<SchemeDto>,
}

fn scheme_dto_to_node(dto: SchemeDto) -> Result<SchemeNode, JsonError> {
    let degree = match dto.degree {
        None => None,
        Some(DegreeDto::Finite(k)) => Some(Degree::Finite(k)),
        Some(DegreeDto::Marker(m)) if m == "unbounded" => Some(Degree::Unbounded),
        Some(DegreeDto::Marker(m)) => return Err(JsonError::BadDegree(m)),
    };
    let children =
        dto.children.into_iter().map(scheme_dto_to_node).collect::<Result<_, _>>()?;
    Ok(SchemeNode { diam: dto.diam, degree, children })
}

fn scheme_node_to_dto(node: &SchemeNode) -> SchemeDto {
    SchemeDto {
        diam: node.diam,
        degree: node.degree.map(|d| match d {
            Degree::Finite(k) => DegreeDto::Finite(k),
            Degree::Unbounded => DegreeDto::Marker("unbounded".to_string()),
        }),
        children: node.children.iter().map(scheme_node_to_dto).collect(),
    }
}

pub fn parse_scheme(text: &str) -> Result<TreeScheme, JsonError> {
    let dto: SchemeDto = serde_json::from_str(text)?;
    Ok(TreeScheme::new(scheme_dto_to_node(dto)?)?)
}

pub fn print_scheme(scheme: &TreeScheme) -> String {
    to_text(&scheme_node_to_dto(scheme.root()))
}

#[derive(Serialize, Deserialize)]
struct TreeDto {
    value: Rat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    children: Vec<TreeDto>,
}

fn tree_node_to_dto(tree: &ValuedTree, node: usize) -> TreeDto {
    TreeDto {
        value: tree.value(node),
        label: tree.label(node).map(str::to_string),
        children: tree.children(node).iter().map(|&c| tree_node_to_dto(tree, c)).collect(),
    }
}

pub fn print_tree(tree: &ValuedTree) -> String {
    to_text(&tree_node_to_dto(tree, tree.root()))
}

/// Rebuilds a valued tree from its nested form. Nodes are numbered in
/// preorder; a reparse of printed output is isomorphic to the original
/// tree and prints back to the same text.
pub fn parse_tree(text: &str) -> Result<ValuedTree, JsonError> {
    fn flatten(
        dto: TreeDto,
        parent: Option<usize>,
        parents: &mut Vec<Option<usize>>,
        values: &mut Vec<Rat>,
        labels: &mut Vec<Option<String>>,
    ) {
        let id = parents.len();
        parents.push(parent);
        values.push(dto.value);
        labels.push(dto.label);
        for child in dto.children {
            flatten(child, Some(id), parents, values, labels);
        }
    }
    let dto: TreeDto = serde_json::from_str(text)?;
    let mut parents = Vec::new();
    let mut values = Vec::new();
    let mut labels = Vec::new();
    flatten(dto, None, &mut parents, &mut values, &mut labels);
    Ok(ValuedTree::new(parents, values, labels)?)
}

#[derive(Serialize, Deserialize)]
struct BallDto {
    points: Vec<usize>,
    diam: Rat,
}

#[derive(Deserialize)]
struct PathDto {
    alpha: ExtRat,
    pure: Vec<BallDto>,
}

/// Borrowing serializer for a path, for nesting paths in larger reports.
#[derive(Serialize)]
pub struct PathOut<'a> {
    alpha: ExtRat,
    pure: &'a [Ball],
}

impl<'a> From<&'a AlphaPath> for PathOut<'a> {
    fn from(path: &'a AlphaPath) -> PathOut<'a> {
        PathOut { alpha: path.alpha(), pure: path.pure() }
    }
}

/// Parses a path against its host space. Each listed ball must be an
/// exact ball of the space (complete point set with matching diameter);
/// the sequence is then revalidated as a slim generating set.
pub fn parse_path(text: &str, space: &Space) -> Result<AlphaPath, JsonError> {
    let dto: PathDto = serde_json::from_str(text)?;
    let mut gens = Vec::with_capacity(dto.pure.len());
    for b in &dto.pure {
        let shown = || format!("{{points: {:?}, diam: {}}}", b.points, b.diam);
        if b.points.is_empty() || b.points.iter().any(|&p| p >= space.len()) {
            return Err(JsonError::NotABall(shown()));
        }
        let ball = space.spanned_ball(&b.points);
        if ball.points() != b.points.as_slice() || ball.diameter() != b.diam {
            return Err(JsonError::NotABall(shown()));
        }
        gens.push(ball);
    }
    Ok(path_from_slim(space, &gens, dto.alpha)?)
}

pub fn print_path(path: &AlphaPath) -> String {
    to_text(&PathOut::from(path))
}
