//! The instance description language and its canonical printers.
//!
//! An instance is a UTF-8 text of newline- or whitespace-separated
//! statements; `#` starts a line comment:
//!
//! ```text
//! domain [0,4]
//! grid   P = {0,1,3}
//! fn     g = pl[(0,0),(4,0)]
//! set    S = [0,1] u {3}
//! family G = punctured(g)
//! efam   E = downset{{0,1},{3}}
//! ```
//!
//! Families: `empty`, `full`, `singleton(f)`, `band(lo,hi)`,
//! `interval(lo,hi)`, `punctured(f)`, `sliced[(lo,hi),...]`,
//! `finite{f,...}` where a bound is a function reference, `-inf`, or
//! `+inf`. Set families: `empty`, `full`, `downset{{..},..}` (over the
//! unique declared grid), `closed-subsets(S)`, `separated[S,...]`.
//! Wherever a name is accepted, an inline literal (`pl[...]` or a set
//! expression) is accepted too, which is what makes the canonical printers
//! round-trip: printing any parsed object and re-parsing it yields an
//! identical object.

use anyhow::{anyhow, bail, Result};
use eqlat::rat::Rat;
use eqlat::{
    Domain, Downset, ExtBound, FamilyDesc, Grid, HFam, PLFunc, RealSet, Slice,
};

/// A parsed instance: one domain plus named objects, one namespace.
#[derive(Debug, Clone)]
pub struct Instance {
    pub domain: Domain,
    pub grids: Vec<(String, Grid)>,
    pub fns: Vec<(String, PLFunc)>,
    pub sets: Vec<(String, RealSet)>,
    pub families: Vec<(String, FamilyDesc)>,
    pub efams: Vec<(String, HFam)>,
}

impl Instance {
    fn new(domain: Domain) -> Self {
        Instance {
            domain,
            grids: Vec::new(),
            fns: Vec::new(),
            sets: Vec::new(),
            families: Vec::new(),
            efams: Vec::new(),
        }
    }

    fn is_taken(&self, name: &str) -> bool {
        self.grids.iter().any(|(n, _)| n == name)
            || self.fns.iter().any(|(n, _)| n == name)
            || self.sets.iter().any(|(n, _)| n == name)
            || self.families.iter().any(|(n, _)| n == name)
            || self.efams.iter().any(|(n, _)| n == name)
    }

    /// The grid a command should use: the named one, or the single
    /// declared grid when no name is given.
    pub fn the_grid(&self, name: Option<&str>) -> Result<&Grid> {
        match name {
            Some(n) => self
                .grids
                .iter()
                .find(|(g, _)| g == n)
                .map(|(_, g)| g)
                .ok_or_else(|| anyhow!("unknown grid '{n}'")),
            None => match self.grids.len() {
                1 => Ok(&self.grids[0].1),
                0 => bail!("no grid is declared in the instance"),
                _ => bail!(
                    "{} grids are declared; name the one to use",
                    self.grids.len()
                ),
            },
        }
    }

    /// Resolves a command argument to a function: a declared name or an
    /// inline `pl[...]` literal.
    pub fn resolve_fn(&self, text: &str) -> Result<PLFunc> {
        if let Some((_, f)) = self.fns.iter().find(|(n, _)| n == text.trim()) {
            return Ok(f.clone());
        }
        let mut p = P::new(text)?;
        let f = p.fn_ref(self)?;
        p.finish()?;
        Ok(f)
    }

    /// Resolves a command argument to a set: a declared name or a literal.
    pub fn resolve_set(&self, text: &str) -> Result<RealSet> {
        if let Some((_, s)) = self.sets.iter().find(|(n, _)| n == text.trim()) {
            return Ok(s.clone());
        }
        let mut p = P::new(text)?;
        let s = p.set_expr(&self.domain)?;
        p.finish()?;
        Ok(s)
    }

    /// Resolves a command argument to a family.
    pub fn resolve_family(&self, text: &str) -> Result<FamilyDesc> {
        if let Some((_, g)) = self.families.iter().find(|(n, _)| n == text.trim()) {
            return Ok(g.clone());
        }
        let mut p = P::new(text)?;
        let g = p.family_expr(self)?;
        p.finish()?;
        Ok(g)
    }

    /// Resolves a command argument to a family of closed sets.
    pub fn resolve_efam(&self, text: &str) -> Result<HFam> {
        if let Some((_, h)) = self.efams.iter().find(|(n, _)| n == text.trim()) {
            return Ok(h.clone());
        }
        let mut p = P::new(text)?;
        let h = p.efam_expr(self)?;
        p.finish()?;
        Ok(h)
    }
}

/// Parses a whole instance description.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut p = P::new(text)?;
    let mut inst: Option<Instance> = None;
    while !p.at_end() {
        let (kw, line, col) = p.ident("a statement keyword")?;
        if kw == "domain" {
            if inst.is_some() {
                bail!("line {line}, column {col}: the domain is already declared");
            }
            p.expect(&Tok::LBrack, "'['")?;
            let lo = p.rat("the left end")?;
            p.expect(&Tok::Comma, "','")?;
            let hi = p.rat("the right end")?;
            p.expect(&Tok::RBrack, "']'")?;
            let d = Domain::new(lo, hi)
                .map_err(|e| anyhow!("line {line}, column {col}: {e}"))?;
            inst = Some(Instance::new(d));
            continue;
        }
        let Some(inst) = inst.as_mut() else {
            bail!("line {line}, column {col}: declare the domain before '{kw}'");
        };
        let (name, nline, ncol) = p.ident("a name")?;
        if RESERVED.contains(&name.as_str()) {
            bail!("line {nline}, column {ncol}: '{name}' is a reserved word");
        }
        if inst.is_taken(&name) {
            bail!("line {nline}, column {ncol}: the name '{name}' is already used");
        }
        p.expect(&Tok::Eq, "'='")?;
        match kw.as_str() {
            "grid" => {
                p.expect(&Tok::LBrace, "'{'")?;
                let mut pts = vec![p.rat("a grid point")?];
                while p.eat(&Tok::Comma) {
                    pts.push(p.rat("a grid point")?);
                }
                p.expect(&Tok::RBrace, "'}'")?;
                let g = Grid::new(inst.domain.clone(), pts)
                    .map_err(|e| anyhow!("line {line}, column {col}: {e}"))?;
                inst.grids.push((name, g));
            }
            "fn" => {
                let f = p.pl_expr(&inst.domain)?;
                inst.fns.push((name, f));
            }
            "set" => {
                let s = p.set_expr(&inst.domain)?;
                inst.sets.push((name, s));
            }
            "family" => {
                let g = p.family_expr(inst)?;
                inst.families.push((name, g));
            }
            "efam" => {
                let h = p.efam_expr(inst)?;
                inst.efams.push((name, h));
            }
            other => {
                bail!("line {line}, column {col}: unknown statement '{other}'")
            }
        }
    }
    inst.ok_or_else(|| anyhow!("the instance declares no domain"))
}

/// Parses a standalone rational (used for command arguments).
pub fn parse_rat(text: &str) -> Result<Rat> {
    let mut p = P::new(text)?;
    let r = p.rat("a rational number")?;
    p.finish()?;
    Ok(r)
}

/// Parses a standalone closed interval `[a,b]` as a domain.
pub fn parse_domain(text: &str) -> Result<Domain> {
    let mut p = P::new(text)?;
    p.expect(&Tok::LBrack, "'['")?;
    let lo = p.rat("the left end")?;
    p.expect(&Tok::Comma, "','")?;
    let hi = p.rat("the right end")?;
    p.expect(&Tok::RBrack, "']'")?;
    p.finish()?;
    Domain::new(lo, hi).map_err(|e| anyhow!("{e}"))
}

const RESERVED: &[&str] = &[
    "domain", "grid", "fn", "set", "family", "efam", "pl", "band", "singleton",
    "interval", "punctured", "sliced", "finite", "empty", "full", "downset",
    "closed-subsets", "separated", "u", "inf",
];

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(Rat),
    PosInf,
    NegInf,
    LBrack,
    RBrack,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Eq,
}

impl core::fmt::Display for Tok {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Num(r) => write!(f, "'{r}'"),
            Tok::PosInf => write!(f, "'+inf'"),
            Tok::NegInf => write!(f, "'-inf'"),
            Tok::LBrack => write!(f, "'['"),
            Tok::RBrack => write!(f, "']'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::LBrace => write!(f, "'{{'"),
            Tok::RBrace => write!(f, "'}}'"),
            Tok::Comma => write!(f, "','"),
            Tok::Eq => write!(f, "'='"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let (c, tline, tcol) = (chars[i], line, col);
        let step = |i: &mut usize, col: &mut usize| {
            *i += 1;
            *col += 1;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => step(&mut i, &mut col),
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '[' | ']' | '(' | ')' | '{' | '}' | ',' | '=' => {
                out.push(Spanned {
                    tok: match c {
                        '[' => Tok::LBrack,
                        ']' => Tok::RBrack,
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        '{' => Tok::LBrace,
                        '}' => Tok::RBrace,
                        ',' => Tok::Comma,
                        _ => Tok::Eq,
                    },
                    line: tline,
                    col: tcol,
                });
                step(&mut i, &mut col);
            }
            '+' => {
                if chars[i + 1..].starts_with(&['i', 'n', 'f']) {
                    out.push(Spanned { tok: Tok::PosInf, line: tline, col: tcol });
                    i += 4;
                    col += 4;
                } else {
                    bail!("line {tline}, column {tcol}: '+' is only valid in '+inf'");
                }
            }
            '-' => {
                if chars[i + 1..].starts_with(&['i', 'n', 'f']) {
                    out.push(Spanned { tok: Tok::NegInf, line: tline, col: tcol });
                    i += 4;
                    col += 4;
                } else if chars.get(i + 1).is_some_and(|c| c.is_ascii_digit()) {
                    let (r, used) = lex_number(&chars[i..], tline, tcol)?;
                    out.push(Spanned { tok: Tok::Num(r), line: tline, col: tcol });
                    i += used;
                    col += used;
                } else {
                    bail!(
                        "line {tline}, column {tcol}: '-' must start '-inf' or a number"
                    );
                }
            }
            c if c.is_ascii_digit() => {
                let (r, used) = lex_number(&chars[i..], tline, tcol)?;
                out.push(Spanned { tok: Tok::Num(r), line: tline, col: tcol });
                i += used;
                col += used;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while i < chars.len() {
                    let c = chars[i];
                    let keep = c.is_ascii_alphanumeric()
                        || c == '_'
                        // A hyphen continues a word only before a letter, so
                        // 'closed-subsets' is one name while 'x-2' is not.
                        || (c == '-'
                            && chars.get(i + 1).is_some_and(|n| n.is_ascii_alphabetic()));
                    if !keep {
                        break;
                    }
                    name.push(c);
                    step(&mut i, &mut col);
                }
                out.push(Spanned { tok: Tok::Ident(name), line: tline, col: tcol });
            }
            other => bail!("line {tline}, column {tcol}: unexpected character '{other}'"),
        }
    }
    Ok(out)
}

/// Lexes `p` or `p/q` (optionally negative) starting at `chars[0]`.
fn lex_number(chars: &[char], line: usize, col: usize) -> Result<(Rat, usize)> {
    let mut i = 0usize;
    if chars[0] == '-' {
        i += 1;
    }
    let start = i;
    while i < chars.len() && chars[i].is_ascii_digit() {
        i += 1;
    }
    if i == start {
        bail!("line {line}, column {col}: expected digits");
    }
    let parse_part = |s: &[char]| -> Result<i64> {
        s.iter()
            .collect::<String>()
            .parse::<i64>()
            .map_err(|_| anyhow!("line {line}, column {col}: number does not fit in 64 bits"))
    };
    let mut numer = parse_part(&chars[start..i])?;
    if chars[0] == '-' {
        numer = -numer;
    }
    let mut denom = 1i64;
    if i < chars.len() && chars[i] == '/' {
        i += 1;
        let dstart = i;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        if i == dstart {
            bail!("line {line}, column {col}: expected digits after '/'");
        }
        denom = parse_part(&chars[dstart..i])?;
        if denom == 0 {
            bail!("line {line}, column {col}: zero denominator");
        }
    }
    Ok((eqlat::rat::ratio(numer, denom), i))
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct P {
    toks: Vec<Spanned>,
    i: usize,
}

impl P {
    fn new(text: &str) -> Result<Self> {
        Ok(P { toks: lex(text)?, i: 0 })
    }

    fn at_end(&self) -> bool {
        self.i >= self.toks.len()
    }

    fn finish(&self) -> Result<()> {
        match self.toks.get(self.i) {
            None => Ok(()),
            Some(s) => bail!(
                "line {}, column {}: unexpected {} after the expression",
                s.line,
                s.col,
                s.tok
            ),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|s| &s.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.i + 1).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.i) {
            Some(s) => (s.line, s.col),
            None => self
                .toks
                .last()
                .map(|s| (s.line, s.col + 1))
                .unwrap_or((1, 1)),
        }
    }

    fn bump(&mut self, what: &str) -> Result<Spanned> {
        let (line, col) = self.here();
        let s = self
            .toks
            .get(self.i)
            .cloned()
            .ok_or_else(|| anyhow!("line {line}, column {col}: expected {what}, found end of input"))?;
        self.i += 1;
        Ok(s)
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<Spanned> {
        let s = self.bump(what)?;
        if &s.tok != tok {
            bail!("line {}, column {}: expected {what}, found {}", s.line, s.col, s.tok);
        }
        Ok(s)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize, usize)> {
        let s = self.bump(what)?;
        match s.tok {
            Tok::Ident(name) => Ok((name, s.line, s.col)),
            other => bail!("line {}, column {}: expected {what}, found {other}", s.line, s.col),
        }
    }

    fn rat(&mut self, what: &str) -> Result<Rat> {
        let s = self.bump(what)?;
        match s.tok {
            Tok::Num(r) => Ok(r),
            other => bail!("line {}, column {}: expected {what}, found {other}", s.line, s.col),
        }
    }

    /// `pl[(x,y),...]`, checked to span `dom` exactly.
    fn pl_expr(&mut self, dom: &Domain) -> Result<PLFunc> {
        let (kw, line, col) = self.ident("'pl'")?;
        if kw != "pl" {
            bail!("line {line}, column {col}: expected 'pl', found '{kw}'");
        }
        self.expect(&Tok::LBrack, "'['")?;
        let mut pts: Vec<(Rat, Rat)> = Vec::new();
        loop {
            self.expect(&Tok::LParen, "'('")?;
            let x = self.rat("an abscissa")?;
            self.expect(&Tok::Comma, "','")?;
            let y = self.rat("a value")?;
            self.expect(&Tok::RParen, "')'")?;
            pts.push((x, y));
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(&Tok::RBrack, "']'")?;
        let f = PLFunc::new(pts).map_err(|e| anyhow!("line {line}, column {col}: {e}"))?;
        if &f.domain() != dom {
            bail!(
                "line {line}, column {col}: the function spans {} but the domain is {}",
                f.domain(),
                dom
            );
        }
        Ok(f)
    }

    /// A set literal: `{}` or pieces (`[a,b]`, `(a,b)`, `[a,b)`, `(a,b]`,
    /// `{p}`) joined with `u`.
    fn set_expr(&mut self, dom: &Domain) -> Result<RealSet> {
        let (line, col) = self.here();
        // Lone `{}` is the empty set.
        if self.peek() == Some(&Tok::LBrace) && self.peek2() == Some(&Tok::RBrace) {
            self.i += 2;
            return Ok(RealSet::empty(dom));
        }
        let mut acc = self.set_piece(dom)?;
        loop {
            match self.peek() {
                Some(Tok::Ident(u)) if u == "u" => {
                    self.i += 1;
                    let next = self.set_piece(dom)?;
                    acc = acc
                        .union(&next)
                        .map_err(|e| anyhow!("line {line}, column {col}: {e}"))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn set_piece(&mut self, dom: &Domain) -> Result<RealSet> {
        let s = self.bump("a set piece")?;
        let (line, col) = (s.line, s.col);
        let ctx = |e: eqlat::Error| anyhow!("line {line}, column {col}: {e}");
        match s.tok {
            Tok::LBrace => {
                let p = self.rat("a point")?;
                self.expect(&Tok::RBrace, "'}'")?;
                RealSet::point(dom, p).map_err(ctx)
            }
            Tok::LBrack | Tok::LParen => {
                let lo_closed = s.tok == Tok::LBrack;
                let lo = self.rat("the left end")?;
                self.expect(&Tok::Comma, "','")?;
                let hi = self.rat("the right end")?;
                let e = self.bump("']' or ')'")?;
                let hi_closed = match e.tok {
                    Tok::RBrack => true,
                    Tok::RParen => false,
                    other => bail!(
                        "line {}, column {}: expected ']' or ')', found {other}",
                        e.line,
                        e.col
                    ),
                };
                RealSet::interval(dom, lo, hi, lo_closed, hi_closed).map_err(ctx)
            }
            other => bail!("line {line}, column {col}: expected a set piece, found {other}"),
        }
    }

    /// A function reference: declared name or inline `pl[...]`.
    fn fn_ref(&mut self, inst: &Instance) -> Result<PLFunc> {
        match self.peek() {
            Some(Tok::Ident(name)) if name == "pl" => self.pl_expr(&inst.domain),
            Some(Tok::Ident(_)) => {
                let (name, line, col) = self.ident("a function name")?;
                inst.fns
                    .iter()
                    .find(|(n, _)| *n == name)
                    .map(|(_, f)| f.clone())
                    .ok_or_else(|| anyhow!("line {line}, column {col}: unknown function '{name}'"))
            }
            _ => {
                let (line, col) = self.here();
                bail!("line {line}, column {col}: expected a function name or 'pl[...]'")
            }
        }
    }

    /// A band/interval bound: `-inf`, `+inf`, or a function reference.
    fn bound_expr(&mut self, inst: &Instance) -> Result<ExtBound> {
        match self.peek() {
            Some(Tok::NegInf) => {
                self.i += 1;
                Ok(ExtBound::NegInf)
            }
            Some(Tok::PosInf) => {
                self.i += 1;
                Ok(ExtBound::PosInf)
            }
            _ => Ok(ExtBound::Fin(self.fn_ref(inst)?)),
        }
    }

    /// A family expression or declared family name.
    fn family_expr(&mut self, inst: &Instance) -> Result<FamilyDesc> {
        let (head, line, col) = self.ident("a family")?;
        let ctx = |e: eqlat::Error| anyhow!("line {line}, column {col}: {e}");
        match head.as_str() {
            "empty" => Ok(FamilyDesc::Empty),
            "full" => Ok(FamilyDesc::Full),
            "singleton" => {
                self.expect(&Tok::LParen, "'('")?;
                let f = self.fn_ref(inst)?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(FamilyDesc::singleton(f))
            }
            "punctured" => {
                self.expect(&Tok::LParen, "'('")?;
                let f = self.fn_ref(inst)?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(FamilyDesc::punctured(f))
            }
            "band" | "interval" => {
                self.expect(&Tok::LParen, "'('")?;
                let lo = self.bound_expr(inst)?;
                self.expect(&Tok::Comma, "','")?;
                let hi = self.bound_expr(inst)?;
                self.expect(&Tok::RParen, "')'")?;
                if head == "band" {
                    FamilyDesc::open_band(lo, hi).map_err(ctx)
                } else {
                    FamilyDesc::order_interval(lo, hi).map_err(ctx)
                }
            }
            "sliced" => {
                self.expect(&Tok::LBrack, "'['")?;
                let mut slices = Vec::new();
                loop {
                    self.expect(&Tok::LParen, "'('")?;
                    let lo = self.bound_expr(inst)?;
                    self.expect(&Tok::Comma, "','")?;
                    let hi = self.bound_expr(inst)?;
                    self.expect(&Tok::RParen, "')'")?;
                    slices.push(Slice::new(lo, hi).map_err(ctx)?);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(&Tok::RBrack, "']'")?;
                FamilyDesc::sliced(slices).map_err(ctx)
            }
            "finite" => {
                self.expect(&Tok::LBrace, "'{'")?;
                let mut members = vec![self.fn_ref(inst)?];
                while self.eat(&Tok::Comma) {
                    members.push(self.fn_ref(inst)?);
                }
                self.expect(&Tok::RBrace, "'}'")?;
                FamilyDesc::finite(members).map_err(ctx)
            }
            name => inst
                .families
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, g)| g.clone())
                .ok_or_else(|| anyhow!("line {line}, column {col}: unknown family '{name}'")),
        }
    }

    /// A set reference: declared name or a set literal.
    fn set_ref(&mut self, inst: &Instance) -> Result<RealSet> {
        match self.peek() {
            Some(Tok::Ident(_)) => {
                let (name, line, col) = self.ident("a set name")?;
                inst.sets
                    .iter()
                    .find(|(n, _)| *n == name)
                    .map(|(_, s)| s.clone())
                    .ok_or_else(|| anyhow!("line {line}, column {col}: unknown set '{name}'"))
            }
            _ => self.set_expr(&inst.domain),
        }
    }

    /// A closed-set-family expression or declared name.
    fn efam_expr(&mut self, inst: &Instance) -> Result<HFam> {
        let (head, line, col) = self.ident("a set family")?;
        let ctx = |e: eqlat::Error| anyhow!("line {line}, column {col}: {e}");
        match head.as_str() {
            "empty" => Ok(HFam::Empty),
            "full" => Ok(HFam::Full),
            "downset" => {
                let grid = match inst.grids.len() {
                    1 => &inst.grids[0].1,
                    0 => bail!(
                        "line {line}, column {col}: 'downset' needs a declared grid"
                    ),
                    n => bail!(
                        "line {line}, column {col}: 'downset' is ambiguous with {n} grids declared"
                    ),
                };
                self.expect(&Tok::LBrace, "'{'")?;
                let mut gens: Vec<u32> = Vec::new();
                if !self.eat(&Tok::RBrace) {
                    loop {
                        self.expect(&Tok::LBrace, "'{'")?;
                        let mut mask = 0u32;
                        if !self.eat(&Tok::RBrace) {
                            loop {
                                let (pline, pcol) = self.here();
                                let v = self.rat("a grid point")?;
                                let idx = grid
                                    .points()
                                    .iter()
                                    .position(|p| p == &v)
                                    .ok_or_else(|| anyhow!(
                                        "line {pline}, column {pcol}: '{v}' is not a grid point"
                                    ))?;
                                mask |= 1 << idx;
                                if !self.eat(&Tok::Comma) {
                                    break;
                                }
                            }
                            self.expect(&Tok::RBrace, "'}'")?;
                        }
                        gens.push(mask);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                    self.expect(&Tok::RBrace, "'}'")?;
                }
                Ok(HFam::Downset(
                    Downset::from_generators(grid.clone(), &gens).map_err(ctx)?,
                ))
            }
            "closed-subsets" => {
                self.expect(&Tok::LParen, "'('")?;
                let s = self.set_ref(inst)?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(HFam::ClosedSubsets(s))
            }
            "separated" => {
                self.expect(&Tok::LBrack, "'['")?;
                let mut parts = vec![self.set_ref(inst)?];
                while self.eat(&Tok::Comma) {
                    parts.push(self.set_ref(inst)?);
                }
                self.expect(&Tok::RBrack, "']'")?;
                HFam::separated_union(parts).map_err(ctx)
            }
            name => inst
                .efams
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, h)| h.clone())
                .ok_or_else(|| anyhow!("line {line}, column {col}: unknown set family '{name}'")),
        }
    }
}

// ---------------------------------------------------------------------------
// Canonical printers (inverse of the parser on every parseable object)
// ---------------------------------------------------------------------------

pub fn fn_str(f: &PLFunc) -> String {
    let mut out = String::from("pl[");
    for (i, (x, y)) in f.breakpoints().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&format!("({x},{y})"));
    }
    out.push(']');
    out
}

pub fn set_str(s: &RealSet) -> String {
    if s.components().is_empty() {
        return "{}".into();
    }
    let mut out = String::new();
    for (i, c) in s.components().iter().enumerate() {
        if i > 0 {
            out.push_str(" u ");
        }
        if c.is_point() {
            out.push_str(&format!("{{{}}}", c.lo()));
        } else {
            out.push_str(&format!(
                "{}{},{}{}",
                if c.lo_closed() { '[' } else { '(' },
                c.lo(),
                c.hi(),
                if c.hi_closed() { ']' } else { ')' },
            ));
        }
    }
    out
}

pub fn bound_str(b: &ExtBound) -> String {
    match b {
        ExtBound::NegInf => "-inf".into(),
        ExtBound::PosInf => "+inf".into(),
        ExtBound::Fin(f) => fn_str(f),
    }
}

pub fn family_str(g: &FamilyDesc) -> String {
    match g {
        FamilyDesc::Empty => "empty".into(),
        FamilyDesc::Full => "full".into(),
        FamilyDesc::Singleton(f) => format!("singleton({})", fn_str(f)),
        FamilyDesc::OrderInterval(lo, hi) => {
            format!("interval({},{})", bound_str(lo), bound_str(hi))
        }
        FamilyDesc::OpenBand(lo, hi) => {
            format!("band({},{})", bound_str(lo), bound_str(hi))
        }
        FamilyDesc::Punctured(f) => format!("punctured({})", fn_str(f)),
        FamilyDesc::Sliced(slices) => {
            let body: Vec<String> = slices
                .iter()
                .map(|s| format!("({},{})", bound_str(&s.lo), bound_str(&s.hi)))
                .collect();
            format!("sliced[{}]", body.join(","))
        }
        FamilyDesc::Finite(ms) => {
            let body: Vec<String> = ms.iter().map(fn_str).collect();
            format!("finite{{{}}}", body.join(","))
        }
        // Least-family constructions are built programmatically and carry a
        // grid and tagging of their own; they have no textual form.
        FamilyDesc::SyntheticLeast(s) => {
            format!("synthetic({})", downset_str(s.target()))
        }
    }
}

/// One downset member as a braced point list, e.g. `{0,1}`.
pub fn member_str(grid: &Grid, mask: u32) -> String {
    let pts: Vec<String> = grid
        .points()
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, p)| p.to_string())
        .collect();
    format!("{{{}}}", pts.join(","))
}

pub fn downset_str(d: &Downset) -> String {
    let members: Vec<String> = d
        .maximal()
        .iter()
        .map(|&m| member_str(d.grid(), m))
        .collect();
    format!("downset{{{}}}", members.join(","))
}

pub fn efam_str(h: &HFam) -> String {
    match h {
        HFam::Empty => "empty".into(),
        HFam::Full => "full".into(),
        HFam::Downset(d) => downset_str(d),
        HFam::ClosedSubsets(s) => format!("closed-subsets({})", set_str(s)),
        HFam::SeparatedUnion(parts) => {
            let body: Vec<String> = parts.iter().map(set_str).collect();
            format!("separated[{}]", body.join(","))
        }
    }
}

pub fn grid_str(g: &Grid) -> String {
    let pts: Vec<String> = g.points().iter().map(|p| p.to_string()).collect();
    format!("{{{}}}", pts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# a worked instance
domain [0,4]
grid P = {0,1,3}
fn g = pl[(0,0),(4,0)]
fn z = pl[(0,2),(1,1/2),(4,3)]
fn w = pl[(0,-1),(2,-3/2),(4,-1)]
set S = [0,1] u {3}
set T = (1/2,2] u [3,7/2)
family G = punctured(g)
family B = band(g,+inf)
family I = interval(-inf,z)
family L = sliced[(g,z),(pl[(0,4),(4,4)],+inf)]
family F = finite{g,z,w}
efam E = downset{{0,1},{3}}
efam C = closed-subsets(S)
efam U = separated[[0,1],{3}]
efam N = downset{}
efam O = downset{{}}
";

    fn sample() -> Instance {
        parse_instance(SAMPLE).expect("the sample parses")
    }

    #[test]
    fn parses_the_sample_instance() {
        let inst = sample();
        assert_eq!(inst.grids.len(), 1);
        assert_eq!(inst.fns.len(), 3);
        assert_eq!(inst.sets.len(), 2);
        assert_eq!(inst.families.len(), 5);
        assert_eq!(inst.efams.len(), 5);
    }

    #[test]
    fn every_printed_object_reparses_identically() {
        let inst = sample();
        for (_, f) in &inst.fns {
            assert_eq!(&inst.resolve_fn(&fn_str(f)).unwrap(), f);
        }
        for (_, s) in &inst.sets {
            assert_eq!(&inst.resolve_set(&set_str(s)).unwrap(), s);
        }
        for (_, g) in &inst.families {
            assert_eq!(&inst.resolve_family(&family_str(g)).unwrap(), g);
        }
        for (_, h) in &inst.efams {
            assert_eq!(&inst.resolve_efam(&efam_str(h)).unwrap(), h);
        }
    }

    #[test]
    fn downset_literals_follow_the_grid() {
        let inst = sample();
        let HFam::Downset(d) = inst.resolve_efam("E").unwrap() else {
            panic!("E is a downset")
        };
        // Points 0 and 1 are bits 0 and 1; point 3 is bit 2.
        assert_eq!(d.maximal(), &[0b011, 0b100]);
        let HFam::Downset(n) = inst.resolve_efam("N").unwrap() else {
            panic!("N is a downset")
        };
        assert!(n.is_empty_family());
        let HFam::Downset(o) = inst.resolve_efam("O").unwrap() else {
            panic!("O is a downset")
        };
        assert_eq!(o.maximal(), &[0]);
        assert_eq!(downset_str(&o), "downset{{}}");
        assert_eq!(downset_str(&n), "downset{}");
    }

    #[test]
    fn errors_carry_line_and_column() {
        let err = parse_instance("domain [0,4]\nfn f = pl[(2,0),(1,1)]")
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 2"), "got: {err}");
        let err = parse_instance("fn f = pl[(0,0),(4,0)]").unwrap_err().to_string();
        assert!(err.contains("declare the domain"), "got: {err}");
        let err = parse_instance("domain [0,4]\nfamily G = punctured(h)")
            .unwrap_err()
            .to_string();
        assert!(err.contains("unknown function 'h'"), "got: {err}");
        let err = parse_instance("domain [0,4]\nefam E = downset{{5}}\ngrid P = {0,1}")
            .unwrap_err()
            .to_string();
        assert!(err.contains("needs a declared grid"), "got: {err}");
        let err =
            parse_instance("domain [0,4]\ngrid P = {0,1}\nefam E = downset{{5}}")
                .unwrap_err()
                .to_string();
        assert!(err.contains("'5' is not a grid point"), "got: {err}");
    }

    #[test]
    fn duplicate_and_reserved_names_are_rejected() {
        let err = parse_instance("domain [0,4]\nfn g = pl[(0,0),(4,0)]\nset g = {}")
            .unwrap_err()
            .to_string();
        assert!(err.contains("already used"), "got: {err}");
        let err = parse_instance("domain [0,4]\nfn band = pl[(0,0),(4,0)]")
            .unwrap_err()
            .to_string();
        assert!(err.contains("reserved"), "got: {err}");
    }

    #[test]
    fn functions_must_span_the_domain() {
        let err = parse_instance("domain [0,4]\nfn f = pl[(0,0),(3,0)]")
            .unwrap_err()
            .to_string();
        assert!(err.contains("spans"), "got: {err}");
    }
}
