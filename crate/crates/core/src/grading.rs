//! Degrees in (f, t, c) coordinates and the shifts of differentials.
//!
//! With h1 inverted the Adams filtration `f` only matters up to a global
//! shift, so most of the crate works with the bidegree `(t, c)` alone.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degree {
    pub f: i32,
    pub t: i32,
    pub c: i32,
    /// Bockstein filtration; only present on Bockstein pages.
    pub eps: Option<u32>,
}

impl Degree {
    pub const ZERO: Degree = Degree { f: 0, t: 0, c: 0, eps: None };

    pub const fn new(f: i32, t: i32, c: i32) -> Self {
        Degree { f, t, c, eps: None }
    }

    /// Back to `(f, s, w)`.
    pub fn to_fsw(self) -> (i32, i32, i32) {
        let s = self.f + 2 * self.t - self.c;
        let w = self.f + self.t - self.c;
        (self.f, s, w)
    }

    pub fn bidegree(self) -> Bidegree {
        Bidegree { t: self.t, c: self.c }
    }
}

impl core::ops::Add for Degree {
    type Output = Degree;
    fn add(self, o: Degree) -> Degree {
        let eps = match (self.eps, o.eps) {
            (Some(a), Some(b)) => Some(a + b),
            (a, None) => a,
            (None, b) => b,
        };
        Degree { f: self.f + o.f, t: self.t + o.t, c: self.c + o.c, eps }
    }
}

/// Stem `t = s - w` and Chow weight `c = s + f - 2w`.
pub fn convert_degree(f: i32, s: i32, w: i32) -> Degree {
    Degree::new(f, s - w, s + f - 2 * w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bidegree {
    pub t: i32,
    pub c: i32,
}

impl Bidegree {
    pub const fn new(t: i32, c: i32) -> Self {
        Bidegree { t, c }
    }

    pub fn shifted(self, s: DegreeShift) -> Bidegree {
        Bidegree { t: self.t + s.dt, c: self.c + s.dc }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SsKind {
    Bockstein,
    Adams,
}

impl SsKind {
    pub fn name(self) -> &'static str {
        match self {
            SsKind::Bockstein => "bockstein",
            SsKind::Adams => "adams",
        }
    }

    pub fn first_page(self) -> u32 {
        match self {
            SsKind::Bockstein => 1,
            SsKind::Adams => 2,
        }
    }
}

/// Change of degree along a differential `d_r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeShift {
    pub deps: Option<u32>,
    pub df: Option<i32>,
    pub dt: i32,
    pub dc: i32,
}

pub fn diff_shift(ss: SsKind, r: u32) -> Result<DegreeShift> {
    if r < ss.first_page() {
        return Err(Error::InvalidPage { ss: ss.name(), r });
    }
    Ok(match ss {
        SsKind::Bockstein => DegreeShift { deps: Some(r), df: Some(1), dt: -1, dc: 0 },
        SsKind::Adams => DegreeShift { deps: None, df: None, dt: -1, dc: r as i32 - 1 },
    })
}

/// A rectangular truncation `0 <= t <= t_max`, `0 <= c <= c_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window {
    pub t_max: i32,
    pub c_max: i32,
}

impl Window {
    pub const fn new(t_max: i32, c_max: i32) -> Self {
        Window { t_max, c_max }
    }

    /// The default vertical extent for a given stem range.
    pub const fn with_default_c(t_max: i32) -> Self {
        Window { t_max, c_max: t_max + 5 }
    }

    pub fn contains(&self, b: Bidegree) -> bool {
        (0..=self.t_max).contains(&b.t) && (0..=self.c_max).contains(&b.c)
    }

    /// The larger window actually computed so that every page is exact on
    /// `self`. Each page of either spectral sequence reads one stem to the
    /// right, and Adams differentials climb `r - 1` rows, so both margins
    /// grow with the number of pages, which grows like `log2 t`.
    pub fn internal(&self) -> Window {
        let mut log = 0;
        while (1i64 << log) <= (self.t_max as i64 + 2) {
            log += 1;
        }
        let margin = 2 * (log + 2);
        Window {
            t_max: self.t_max + margin,
            c_max: self.c_max.max(self.t_max + 4) + margin,
        }
    }
}
