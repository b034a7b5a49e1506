//! An interactive session of the semantic game: a human plays one side,
//! the engine plays the other with optimal moves.

use hybrid_games::game::{Game, GameError, GameState, MoveStyle, Player};
use hybrid_games::kripke::Model;
use thiserror::Error;

/// One ply: either the human picks a successor by index, or the engine
/// picks for whoever's turn it is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Choice {
    Move(usize),
    Engine,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlayError {
    #[error("the game is over")]
    GameOver,
    #[error("illegal move index {0}")]
    IllegalMove(usize),
    #[error("it is the engine's turn, not yours")]
    NotYourTurn,
    #[error(transparent)]
    Game(#[from] GameError),
}

/// A running game. Every recorded move is legal; the session ends exactly
/// at a leaf, whose label names the winner.
pub struct PlaySession {
    model: Model,
    human: Player,
    current: GameState,
    history: Vec<GameState>,
}

impl PlaySession {
    pub fn new(model: Model, start: GameState, human: Player) -> Result<Self, GameError> {
        // surface unknown nominals right away instead of mid-game
        Game::new(&model).moves(&start)?;
        Ok(PlaySession {
            model,
            human,
            current: start,
            history: Vec::new(),
        })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn human(&self) -> Player {
        self.human
    }

    pub fn current(&self) -> &GameState {
        &self.current
    }

    /// States played so far, oldest first, excluding the current one.
    pub fn history(&self) -> &[GameState] {
        &self.history
    }

    /// Whose move it is and the legal successors (empty at a leaf).
    pub fn turn(&self) -> (Player, Vec<GameState>) {
        Game::with_style(&self.model, MoveStyle::Direct)
            .moves(&self.current)
            .expect("session states stay well formed")
    }

    pub fn is_over(&self) -> bool {
        self.turn().1.is_empty()
    }

    /// The winner, once the session sits at a leaf.
    pub fn winner(&self) -> Option<Player> {
        let (label, moves) = self.turn();
        moves.is_empty().then_some(label)
    }

    /// Advances one ply. Index choices are only accepted on the human's
    /// turn; `Choice::Engine` makes the engine move for whoever's turn it
    /// is, picking a winning move when one exists and the first legal move
    /// otherwise.
    pub fn play_step(&mut self, choice: Choice) -> Result<&GameState, PlayError> {
        let (mover, moves) = self.turn();
        if moves.is_empty() {
            return Err(PlayError::GameOver);
        }
        let next = match choice {
            Choice::Move(index) => {
                if mover != self.human {
                    return Err(PlayError::NotYourTurn);
                }
                moves
                    .get(index)
                    .cloned()
                    .ok_or(PlayError::IllegalMove(index))?
            }
            Choice::Engine => {
                let game = Game::new(&self.model);
                let mut pick = None;
                for candidate in &moves {
                    if game.who_wins(candidate)? == mover {
                        pick = Some(candidate.clone());
                        break;
                    }
                }
                pick.unwrap_or_else(|| moves[0].clone())
            }
        };
        self.history
            .push(std::mem::replace(&mut self.current, next));
        Ok(&self.current)
    }
}
