//! Scene files and the `d0` command-line front end.

pub mod commands;
pub mod scene;

pub use scene::{parse_scene, print_scene, Scene, SceneError};
