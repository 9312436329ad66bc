//! Guide chapters compiled as doctests so their snippets cannot drift.

#[doc = include_str!("../../../book/src/introduction.md")]
pub struct Introduction;

#[doc = include_str!("../../../book/src/precision.md")]
pub struct Precision;

#[doc = include_str!("../../../book/src/lambert.md")]
pub struct Lambert;

#[doc = include_str!("../../../book/src/pochhammer.md")]
pub struct Pochhammer;

#[doc = include_str!("../../../book/src/qgamma.md")]
pub struct QGamma;

#[doc = include_str!("../../../book/src/theta.md")]
pub struct Theta;

#[doc = include_str!("../../../book/src/cli.md")]
pub struct Cli;

#[doc = include_str!("../../../README.md")]
pub struct Readme;
