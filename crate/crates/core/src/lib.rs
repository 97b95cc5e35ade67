//! Verification of continuous-time nondeterministic systems against
//! continuous-time LTL.
//!
//! A formula is translated to an automaton over observation maps (one of
//! A, Z, E, N per proposition and time slice), the system is abstracted to a
//! finite grid model whose transitions carry the same kind of labels, and the
//! product is solved as a Büchi game. A won game proves that every
//! trajectory satisfies the formula; a lost game is inconclusive.

pub mod abstraction;
pub mod automata;
pub mod game;
pub mod gen;
pub mod graph;
pub mod ltl;
pub mod observations;
pub mod report;
pub mod scenario;
pub mod verify;
