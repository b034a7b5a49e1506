//! The two-player semantic game played over a model.
//!
//! Two players, I and You, argue about the truth of a formula. The state
//! `P, w: f` says I am the proponent of `f` at world `w`; in `O, w: f` I am
//! the opponent. The global states `P: f` and `O: f` concern truth in the
//! whole model. Each non-leaf state belongs to one player, who chooses the
//! successor; leaves are labelled with the player who wins there. I have a
//! winning strategy for `P, w: f` exactly when `f` is true at `w`.
//!
//! [`Game::moves`] produces the labelled successors of a state,
//! [`Game::who_wins`] solves the game by memoized backward induction, and
//! [`Game::winning_strategy`] materializes a winning strategy as a subtree
//! of the game tree. [`Game::verify_strategy`] checks a strategy against the
//! move relation alone, independently of the solver.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kripke::{Model, UnknownNominal, World};
use crate::syntax::{Formula, Nominal};

/// Which side of a claim I am on.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Role {
    /// I am the proponent.
    P,
    /// I am the opponent.
    O,
}

impl Role {
    pub fn dual(self) -> Role {
        match self {
            Role::P => Role::O,
            Role::O => Role::P,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::P => "P",
            Role::O => "O",
        })
    }
}

/// A player: `I` (me) or `Y` (you). Labels both whose turn a node is and,
/// at a leaf, who wins.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Player {
    I,
    Y,
}

impl Player {
    pub fn dual(self) -> Player {
        match self {
            Player::I => Player::Y,
            Player::Y => Player::I,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::I => "I",
            Player::Y => "Y",
        })
    }
}

/// Where a claim is evaluated: at a particular world, or in the whole model.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Locus {
    Global,
    At(World),
}

/// A position of the semantic game.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GameState {
    pub role: Role,
    pub locus: Locus,
    pub formula: Arc<Formula>,
}

impl GameState {
    pub fn proponent(w: World, f: impl Into<Arc<Formula>>) -> Self {
        GameState {
            role: Role::P,
            locus: Locus::At(w),
            formula: f.into(),
        }
    }

    pub fn opponent(w: World, f: impl Into<Arc<Formula>>) -> Self {
        GameState {
            role: Role::O,
            locus: Locus::At(w),
            formula: f.into(),
        }
    }

    pub fn global(role: Role, f: impl Into<Arc<Formula>>) -> Self {
        GameState {
            role,
            locus: Locus::Global,
            formula: f.into(),
        }
    }

    pub fn is_elementary(&self) -> bool {
        self.formula.is_elementary()
    }

    /// Bracket-notation rendering, e.g. `P, w3: ~[]p` or `P: p | ~p`.
    pub fn render(&self, model: &Model) -> String {
        match self.locus {
            Locus::Global => format!("{}: {}", self.role, self.formula),
            Locus::At(w) => format!("{}, {}: {}", self.role, model.world_name(w), self.formula),
        }
    }
}

/// How modal and global moves enumerate their successors.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum MoveStyle {
    /// Successors range over worlds, following the truth clauses directly.
    #[default]
    Direct,
    /// Named-model reformulation: `[]`, `<>` and global moves range over
    /// assigned nominals, one representative per world, producing
    /// `~R(i,j) | f` and `R(i,j) & f` successors.
    Named,
    /// As `Named`, but ranging over every assigned nominal, mirroring the
    /// disjunctive game exactly.
    NamedAllNominals,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error(transparent)]
    UnknownNominal(#[from] UnknownNominal),
    #[error("the named move style requires a named model")]
    UnnamedModel,
    #[error("malformed strategy: {0}")]
    MalformedStrategy(String),
    #[error("invalid strategy JSON: {0}")]
    Json(String),
}

/// The semantic game over one model. Methods are pure; the backward
/// induction memo lives inside each call, so a `Game` may be shared freely.
#[derive(Clone, Copy)]
pub struct Game<'m> {
    model: &'m Model,
    style: MoveStyle,
}

impl<'m> Game<'m> {
    pub fn new(model: &'m Model) -> Self {
        Game {
            model,
            style: MoveStyle::Direct,
        }
    }

    pub fn with_style(model: &'m Model, style: MoveStyle) -> Self {
        Game { model, style }
    }

    pub fn model(&self) -> &'m Model {
        self.model
    }

    /// Whose move a state is and the legal successor states, by the game
    /// rules. Elementary states and `[]`/`<>` states over a world without
    /// successors return an empty list: the label then names the winner of
    /// the leaf.
    pub fn moves(&self, s: &GameState) -> Result<(Player, Vec<GameState>), GameError> {
        self.model.check_nominals(&s.formula)?;
        if self.style != MoveStyle::Direct && !self.model.is_named() {
            return Err(GameError::UnnamedModel);
        }
        let (label, children) = self.proponent_moves(s.locus, &s.formula)?;
        // The opponent variant of every rule swaps I with Y and P with O.
        Ok(match s.role {
            Role::P => (
                label,
                children
                    .into_iter()
                    .map(|(role, locus, formula)| GameState {
                        role,
                        locus,
                        formula,
                    })
                    .collect(),
            ),
            Role::O => (
                label.dual(),
                children
                    .into_iter()
                    .map(|(role, locus, formula)| GameState {
                        role: role.dual(),
                        locus,
                        formula,
                    })
                    .collect(),
            ),
        })
    }

    /// Nominals the named reformulation ranges over: every assigned nominal,
    /// or the first name of each world.
    fn named_range(&self) -> Vec<(Nominal, World)> {
        let mut out: Vec<(Nominal, World)> = Vec::new();
        for (n, w) in self.model.assignment() {
            if self.style == MoveStyle::Named && out.iter().any(|(_, v)| *v == w) {
                continue;
            }
            out.push((n.clone(), w));
        }
        out
    }

    fn canonical_name(&self, w: World) -> Result<Nominal, GameError> {
        self.model
            .names_of(w)
            .first()
            .map(|n| (*n).clone())
            .ok_or(GameError::UnnamedModel)
    }

    #[allow(clippy::type_complexity)]
    fn proponent_moves(
        &self,
        locus: Locus,
        f: &Arc<Formula>,
    ) -> Result<(Player, Vec<(Role, Locus, Arc<Formula>)>), GameError> {
        let w = match locus {
            Locus::Global => {
                // the universal move: You pick where the claim is tested
                let children = match self.style {
                    MoveStyle::Direct => self
                        .model
                        .worlds()
                        .map(|v| (Role::P, Locus::At(v), f.clone()))
                        .collect(),
                    _ => self
                        .named_range()
                        .into_iter()
                        .map(|(_, v)| (Role::P, Locus::At(v), f.clone()))
                        .collect(),
                };
                return Ok((Player::Y, children));
            }
            Locus::At(w) => w,
        };

        let at = |v: World, g: &Arc<Formula>| (Role::P, Locus::At(v), g.clone());
        Ok(match &**f {
            Formula::Or(l, r) => (Player::I, vec![at(w, l), at(w, r)]),
            Formula::And(l, r) => (Player::Y, vec![at(w, l), at(w, r)]),
            Formula::Imp(l, r) => (
                Player::I,
                vec![(Role::O, Locus::At(w), l.clone()), at(w, r)],
            ),
            Formula::Neg(x) => (Player::I, vec![(Role::O, Locus::At(w), x.clone())]),
            Formula::At(i, x) => {
                let v = self.model.world_of(i).expect("checked above");
                (Player::I, vec![at(v, x)])
            }
            Formula::Box(x) => match self.style {
                MoveStyle::Direct => {
                    let succ = self.model.successors(w);
                    if succ.is_empty() {
                        (Player::I, vec![])
                    } else {
                        (Player::Y, succ.iter().map(|v| at(*v, x)).collect())
                    }
                }
                _ => {
                    let i = self.canonical_name(w)?;
                    let children = self
                        .named_range()
                        .into_iter()
                        .map(|(j, v)| {
                            let g = Arc::new(Formula::or(
                                Formula::neg(Formula::Rel(i.clone(), j.clone())),
                                x.clone(),
                            ));
                            (Role::P, Locus::At(v), g)
                        })
                        .collect();
                    (Player::Y, children)
                }
            },
            Formula::Dia(x) => match self.style {
                MoveStyle::Direct => {
                    let succ = self.model.successors(w);
                    if succ.is_empty() {
                        (Player::Y, vec![])
                    } else {
                        (Player::I, succ.iter().map(|v| at(*v, x)).collect())
                    }
                }
                _ => {
                    let i = self.canonical_name(w)?;
                    let children = self
                        .named_range()
                        .into_iter()
                        .map(|(j, v)| {
                            let g = Arc::new(Formula::and(
                                Formula::Rel(i.clone(), j.clone()),
                                x.clone(),
                            ));
                            (Role::P, Locus::At(v), g)
                        })
                        .collect();
                    (Player::I, children)
                }
            },
            Formula::Prop(p) => {
                let won = self.model.proposition_true_at(p, w);
                (if won { Player::I } else { Player::Y }, vec![])
            }
            Formula::Nom(i) => {
                let won = self.model.world_of(i) == Some(w);
                (if won { Player::I } else { Player::Y }, vec![])
            }
            Formula::Rel(i, j) => {
                let gi = self.model.world_of(i).expect("checked above");
                let gj = self.model.world_of(j).expect("checked above");
                let won = self.model.has_edge(gi, gj);
                (if won { Player::I } else { Player::Y }, vec![])
            }
        })
    }

    /// Who has a winning strategy from `s`, by backward induction. The game
    /// tree has finite height, and positions recur across branches, so the
    /// induction memoizes on the state.
    pub fn who_wins(&self, s: &GameState) -> Result<Player, GameError> {
        let mut memo = HashMap::new();
        self.winner(s, &mut memo)
    }

    fn winner(
        &self,
        s: &GameState,
        memo: &mut HashMap<GameState, Player>,
    ) -> Result<Player, GameError> {
        if let Some(w) = memo.get(s) {
            return Ok(*w);
        }
        let (label, children) = self.moves(s)?;
        let mut result = if children.is_empty() {
            label
        } else {
            label.dual()
        };
        for child in &children {
            if self.winner(child, memo)? == label {
                result = label;
                break;
            }
        }
        memo.insert(s.clone(), result);
        Ok(result)
    }

    /// A winning strategy for whichever player wins `s` (one always does).
    /// At states where the winner moves, the first winning successor is
    /// kept; at the other player's states all successors are kept.
    pub fn winning_strategy(&self, s: &GameState) -> Result<StrategyTree, GameError> {
        let mut memo = HashMap::new();
        let owner = self.winner(s, &mut memo)?;
        self.build_strategy(s, owner, &mut memo)
    }

    fn build_strategy(
        &self,
        s: &GameState,
        owner: Player,
        memo: &mut HashMap<GameState, Player>,
    ) -> Result<StrategyTree, GameError> {
        let (label, children) = self.moves(s)?;
        let kept = if children.is_empty() {
            vec![]
        } else if label == owner {
            let mut pick = None;
            for child in &children {
                if self.winner(child, memo)? == owner {
                    pick = Some(child.clone());
                    break;
                }
            }
            let pick = pick.expect("the strategy owner wins, so a winning move exists");
            vec![self.build_strategy(&pick, owner, memo)?]
        } else {
            let mut out = Vec::with_capacity(children.len());
            for child in &children {
                out.push(self.build_strategy(child, owner, memo)?);
            }
            out
        };
        Ok(StrategyTree {
            state: s.clone(),
            label,
            children: kept,
        })
    }

    /// Checks that `tree` is a winning strategy for `owner`: one child kept
    /// wherever the owner moves, all of the game's children wherever the
    /// other player moves, and every leaf won by `owner`. Trees that are not
    /// faithful subtrees of the game (illegal or missing opponent moves)
    /// are errors; trees that are merely not owner-shaped, or lose some
    /// leaf, make the answer `false`.
    pub fn verify_strategy(&self, tree: &StrategyTree, owner: Player) -> Result<bool, GameError> {
        let (label, children) = self.moves(&tree.state)?;
        if tree.label != label {
            return Err(GameError::MalformedStrategy(format!(
                "node {} is labelled {}, but the game labels it {}",
                tree.state.render(self.model),
                tree.label,
                label
            )));
        }
        if children.is_empty() {
            if !tree.children.is_empty() {
                return Err(GameError::MalformedStrategy(format!(
                    "leaf state {} has children",
                    tree.state.render(self.model)
                )));
            }
            return Ok(label == owner);
        }
        if label == owner {
            // a node where the owner moves must keep exactly one child; a
            // different count means the tree is a strategy for the other
            // player (or none), not a structural defect
            if tree.children.len() != 1 {
                return Ok(false);
            }
            let child = &tree.children[0];
            if !children.contains(&child.state) {
                return Err(GameError::MalformedStrategy(format!(
                    "{} is not a legal move from {}",
                    child.state.render(self.model),
                    tree.state.render(self.model)
                )));
            }
            self.verify_strategy(child, owner)
        } else {
            let mut expected = children.clone();
            let mut found: Vec<GameState> = tree.children.iter().map(|c| c.state.clone()).collect();
            expected.sort();
            found.sort();
            if expected != found {
                return Err(GameError::MalformedStrategy(format!(
                    "children of {} do not match the opponent's moves",
                    tree.state.render(self.model)
                )));
            }
            let mut all = true;
            for child in &tree.children {
                all &= self.verify_strategy(child, owner)?;
            }
            Ok(all)
        }
    }
}

/// A strategy: a subtree of the game tree keeping a single child wherever
/// the strategy's owner moves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyTree {
    pub state: GameState,
    /// Whose move the node is (the leaf's winner when there are no moves).
    pub label: Player,
    pub children: Vec<StrategyTree>,
}

impl StrategyTree {
    pub fn node_count(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(StrategyTree::node_count)
            .sum::<usize>()
    }

    pub fn leaves(&self) -> Vec<&StrategyTree> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a StrategyTree>) {
        if self.children.is_empty() {
            out.push(self);
        } else {
            for c in &self.children {
                c.collect_leaves(out);
            }
        }
    }

    pub fn to_json(&self, model: &Model) -> serde_json::Value {
        serde_json::to_value(self.to_dto(model)).expect("strategy serialization cannot fail")
    }

    pub fn from_json(model: &Model, value: &serde_json::Value) -> Result<Self, GameError> {
        let dto: StrategyDto =
            serde_json::from_value(value.clone()).map_err(|e| GameError::Json(e.to_string()))?;
        dto.into_tree(model)
    }

    fn to_dto(&self, model: &Model) -> StrategyDto {
        StrategyDto {
            state: StateDto {
                role: self.state.role,
                world: match self.state.locus {
                    Locus::Global => None,
                    Locus::At(w) => Some(model.world_name(w).to_string()),
                },
                formula: (*self.state.formula).clone(),
            },
            label: self.label,
            children: self.children.iter().map(|c| c.to_dto(model)).collect(),
        }
    }

    /// GraphViz rendering in bracket notation, one node per line.
    pub fn to_dot(&self, model: &Model) -> String {
        let mut out = String::from("digraph strategy {\n  node [shape=box];\n");
        let mut counter = 0;
        self.dot_node(model, &mut out, &mut counter);
        out.push_str("}\n");
        out
    }

    fn dot_node(&self, model: &Model, out: &mut String, counter: &mut usize) -> usize {
        let id = *counter;
        *counter += 1;
        out.push_str(&format!(
            "  n{id} [label=\"[{}]^{}\"];\n",
            self.state.render(model),
            self.label
        ));
        for child in &self.children {
            let cid = child.dot_node(model, out, counter);
            out.push_str(&format!("  n{id} -> n{cid};\n"));
        }
        id
    }
}

#[derive(Serialize, Deserialize)]
struct StrategyDto {
    state: StateDto,
    label: Player,
    children: Vec<StrategyDto>,
}

#[derive(Serialize, Deserialize)]
struct StateDto {
    role: Role,
    world: Option<String>,
    formula: Formula,
}

impl StrategyDto {
    fn into_tree(self, model: &Model) -> Result<StrategyTree, GameError> {
        let locus = match self.state.world {
            None => Locus::Global,
            Some(name) => Locus::At(
                model
                    .world_named(&name)
                    .ok_or_else(|| GameError::Json(format!("unknown world {name:?}")))?,
            ),
        };
        let mut children = Vec::with_capacity(self.children.len());
        for c in self.children {
            children.push(c.into_tree(model)?);
        }
        Ok(StrategyTree {
            state: GameState {
                role: self.state.role,
                locus,
                formula: Arc::new(self.state.formula),
            },
            label: self.label,
            children,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::tests::m1;
    use crate::syntax::{parse, PropVar};
    use crate::testutil::random_formula;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn w(m: &Model, name: &str) -> World {
        m.world_named(name).unwrap()
    }

    #[test]
    fn moves_box_example() {
        let m = m1();
        let g = Game::new(&m);
        let s = GameState::proponent(w(&m, "w1"), parse("[](j | ~[]p)").unwrap());
        let (label, children) = g.moves(&s).unwrap();
        assert_eq!(label, Player::Y);
        let inner = parse("j | ~[]p").unwrap();
        assert_eq!(
            children,
            vec![
                GameState::proponent(w(&m, "w2"), inner.clone()),
                GameState::proponent(w(&m, "w3"), inner),
            ]
        );
    }

    #[test]
    fn moves_leaf_examples() {
        let m = m1();
        let g = Game::new(&m);
        // as opponent of []p at the successor-free w2, I lose: You win the leaf
        let (label, children) = g
            .moves(&GameState::opponent(w(&m, "w2"), parse("[]p").unwrap()))
            .unwrap();
        assert_eq!((label, children.len()), (Player::Y, 0));
        // defending j at w2 = g(j) is an immediate win
        let (label, children) = g
            .moves(&GameState::proponent(w(&m, "w2"), parse("j").unwrap()))
            .unwrap();
        assert_eq!((label, children.len()), (Player::I, 0));
    }

    #[test]
    fn who_wins_examples() {
        let m = m1();
        let g = Game::new(&m);
        let s = GameState::proponent(w(&m, "w1"), parse("[](j | ~[]p)").unwrap());
        assert_eq!(g.who_wins(&s), Ok(Player::I));
        let s = GameState::opponent(w(&m, "w3"), parse("[]p").unwrap());
        assert_eq!(g.who_wins(&s), Ok(Player::I));
    }

    #[test]
    fn strategy_shape_for_box_claim() {
        let m = m1();
        let g = Game::new(&m);
        let s = GameState::proponent(w(&m, "w1"), parse("[](j | ~[]p)").unwrap());
        let tree = g.winning_strategy(&s).unwrap();

        assert_eq!(tree.label, Player::Y);
        assert_eq!(tree.children.len(), 2);
        assert_eq!(tree.node_count(), 7);
        let leaves: Vec<GameState> = tree.leaves().iter().map(|l| l.state.clone()).collect();
        assert_eq!(
            leaves,
            vec![
                GameState::proponent(w(&m, "w2"), parse("j").unwrap()),
                GameState::opponent(w(&m, "w5"), parse("p").unwrap()),
            ]
        );

        assert_eq!(g.verify_strategy(&tree, Player::I), Ok(true));
        // the same tree is not a strategy for You: its leaves are mine
        assert_eq!(g.verify_strategy(&tree, Player::Y), Ok(false));
    }

    #[test]
    fn verify_rejects_missing_opponent_branch() {
        let m = m1();
        let g = Game::new(&m);
        let s = GameState::proponent(w(&m, "w1"), parse("[](j | ~[]p)").unwrap());
        let mut tree = g.winning_strategy(&s).unwrap();
        tree.children.remove(0); // drop the w2 branch of Your move
        assert!(matches!(
            g.verify_strategy(&tree, Player::I),
            Err(GameError::MalformedStrategy(_))
        ));
    }

    #[test]
    fn leaf_strategy_is_single_node() {
        let m = m1();
        let g = Game::new(&m);
        let tree = g
            .winning_strategy(&GameState::proponent(w(&m, "w2"), parse("j").unwrap()))
            .unwrap();
        assert_eq!(tree.node_count(), 1);
        assert_eq!(tree.label, Player::I);
    }

    #[test]
    fn opponent_box_strategy_picks_w5() {
        let m = m1();
        let g = Game::new(&m);
        let tree = g
            .winning_strategy(&GameState::opponent(w(&m, "w3"), parse("[]p").unwrap()))
            .unwrap();
        assert_eq!(tree.node_count(), 2);
        assert_eq!(
            tree.children[0].state,
            GameState::opponent(w(&m, "w5"), parse("p").unwrap())
        );
    }

    #[test]
    fn unknown_nominal_propagates() {
        let m = m1();
        let g = Game::new(&m);
        let s = GameState::proponent(w(&m, "w1"), parse("@k p").unwrap());
        assert!(matches!(g.moves(&s), Err(GameError::UnknownNominal(_))));
    }

    #[test]
    fn named_style_needs_named_model() {
        let m = m1();
        let g = Game::with_style(&m, MoveStyle::Named);
        let s = GameState::proponent(w(&m, "w1"), parse("[]p").unwrap());
        assert_eq!(g.moves(&s).unwrap_err(), GameError::UnnamedModel);
    }

    /// Adequacy and exclusivity on a small population; the full suite runs
    /// in the acceptance tests.
    #[test]
    fn adequacy_and_exclusivity_small() {
        let mut rng = StdRng::seed_from_u64(7);
        let noms = [Nominal::new("i"), Nominal::new("j")];
        let props = [PropVar::new("p")];
        let models: Vec<Model> = crate::kripke::enumerate_models(
            2,
            &props.iter().cloned().collect(),
            &noms.iter().cloned().collect(),
            crate::kripke::DEFAULT_MODEL_CAP,
        )
        .unwrap()
        .collect();
        for _ in 0..40 {
            let f = random_formula(&mut rng, 4, &noms, &props);
            for m in models.iter().step_by(7) {
                let g = Game::new(m);
                for world in m.worlds() {
                    let truth = m.eval(world, &f).unwrap();
                    let p_win = g.who_wins(&GameState::proponent(world, f.clone())).unwrap();
                    let o_win = g.who_wins(&GameState::opponent(world, f.clone())).unwrap();
                    assert_eq!(p_win == Player::I, truth);
                    assert_eq!(o_win == Player::I, !truth);
                    assert_ne!(p_win == Player::I, o_win == Player::I);
                }
                let global = g.who_wins(&GameState::global(Role::P, f.clone())).unwrap();
                assert_eq!(global == Player::I, m.eval_global(&f).unwrap());
            }
        }
    }

    /// On named models the direct rules and both named reformulations agree.
    #[test]
    fn named_reformulation_agreement() {
        let mut rng = StdRng::seed_from_u64(11);
        let noms = [Nominal::new("i"), Nominal::new("j"), Nominal::new("k")];
        let props = [PropVar::new("p")];
        let models: Vec<Model> = crate::kripke::enumerate_models(
            2,
            &props.iter().cloned().collect(),
            &noms.iter().cloned().collect(),
            crate::kripke::DEFAULT_MODEL_CAP,
        )
        .unwrap()
        .collect();
        for _ in 0..25 {
            let f = random_formula(&mut rng, 3, &noms, &props);
            for m in models.iter().step_by(97) {
                let direct = Game::new(m);
                let named = Game::with_style(m, MoveStyle::Named);
                let all = Game::with_style(m, MoveStyle::NamedAllNominals);
                for world in m.worlds() {
                    for role in [Role::P, Role::O] {
                        let s = GameState {
                            role,
                            locus: Locus::At(world),
                            formula: Arc::new(f.clone()),
                        };
                        let expect = direct.who_wins(&s).unwrap();
                        assert_eq!(named.who_wins(&s).unwrap(), expect);
                        assert_eq!(all.who_wins(&s).unwrap(), expect);
                    }
                }
                let s = GameState::global(Role::P, f.clone());
                let expect = direct.who_wins(&s).unwrap();
                assert_eq!(named.who_wins(&s).unwrap(), expect);
                assert_eq!(all.who_wins(&s).unwrap(), expect);
            }
        }
    }

    /// Every strategy the solver emits passes the independent checker.
    #[test]
    fn emitted_strategies_verify() {
        let mut rng = StdRng::seed_from_u64(13);
        let m = m1();
        let g = Game::new(&m);
        let noms = [Nominal::new("j")];
        let props = [PropVar::new("p")];
        for _ in 0..60 {
            let f = random_formula(&mut rng, 4, &noms, &props);
            let s = GameState::proponent(w(&m, "w1"), f);
            let owner = g.who_wins(&s).unwrap();
            let tree = g.winning_strategy(&s).unwrap();
            assert_eq!(g.verify_strategy(&tree, owner), Ok(true));
        }
    }

    #[test]
    fn strategy_json_round_trip() {
        let m = m1();
        let g = Game::new(&m);
        let s = GameState::proponent(w(&m, "w1"), parse("[](j | ~[]p)").unwrap());
        let tree = g.winning_strategy(&s).unwrap();
        let json = tree.to_json(&m);
        let back = StrategyTree::from_json(&m, &json).unwrap();
        assert_eq!(back, tree);
    }

    #[test]
    fn dot_export_uses_bracket_notation() {
        let m = m1();
        let g = Game::new(&m);
        let s = GameState::proponent(w(&m, "w2"), parse("j").unwrap());
        let tree = g.winning_strategy(&s).unwrap();
        assert!(tree.to_dot(&m).contains("[P, w2: j]^I"));
    }
}
