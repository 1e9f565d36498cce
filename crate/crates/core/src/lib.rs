pub mod bench;
pub mod classify;
pub mod cspace;
pub mod environment;
pub mod forbidden;
pub mod geometry;
pub mod io;
pub mod oracle;
pub mod planner;
pub mod render;
pub mod union_find;
