pub mod io;
pub mod lemmas;
pub mod linalg;
pub mod polygons;
pub mod polytope;
pub mod skeleton;
pub mod verify;
