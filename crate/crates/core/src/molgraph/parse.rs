//! Linear notation parser.
//!
//! ```text
//! molecule    := chain
//! chain       := unit closure* branch* ( bond? unit closure* branch* )*
//! branch      := '(' bond? chain ')'
//! unit        := atom | bracket_atom | ring | placeholder
//! atom        := 'C' | 'N' | 'O' | 'S' | 'Cl' | 'H'          (implicit H fill)
//! bracket_atom:= '[' element ( 'H' digits? )? ']'            (no implicit H)
//! ring        := 'c6' ( '<' 1..5 '>' )?                      (benzene)
//! placeholder := '[' ('X'|'Y'|'R') ':' name ']'
//! bond        := '-' | '=' | '#'
//! closure     := bond? ( digit | '%' digit digit )
//! ```
//!
//! A top-level `.` separates disconnected components.
//!
//! A `c6` ring is entered at ring position 0. The chain continues from
//! position 3 (para), or from position `k` for `c6<k>`. Branches take the
//! remaining free positions in ascending order.

use super::{BondOrder, Element, GraphBuilder, GraphError, GroupRole, MolecularGraph, Placeholder};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown element '{0}'")]
    UnknownElement(String),
    #[error("unclosed ring marker {0}")]
    UnclosedRing(u32),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseOptions {
    /// Complete unfilled valences of plain atoms with hydrogens.
    pub fill_hydrogens: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        Self {
            fill_hydrogens: true,
        }
    }
}

pub fn parse_molecule(text: &str) -> Result<MolecularGraph, ParseError> {
    parse_molecule_with(text, ParseOptions::default())
}

pub fn parse_molecule_with(text: &str, options: ParseOptions) -> Result<MolecularGraph, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        gb: GraphBuilder::new(),
        rings: Vec::new(),
        fillable: Vec::new(),
        closures: BTreeMap::new(),
        placeholder_offsets: Vec::new(),
    };
    if text.is_empty() {
        return Err(p.syntax(0, "empty input"));
    }
    p.chain(None, Link::Continue, false)?;
    if let Some((&digit, &(_, _, offset))) = p.closures.iter().next() {
        return Err(ParseError {
            offset,
            kind: ParseErrorKind::UnclosedRing(digit),
        });
    }
    for (idx, &offset) in p.placeholder_offsets.iter().enumerate() {
        let ph = &p.gb.placeholders[idx];
        let want = if ph.role == GroupRole::Insulator { 2 } else { 1 };
        if ph.neighbors.len() != want {
            return Err(p.syntax(
                offset,
                &format!(
                    "placeholder [{}:{}] needs exactly {want} attachment(s), found {}",
                    ph.role.letter(),
                    ph.name,
                    ph.neighbors.len()
                ),
            ));
        }
    }
    if options.fill_hydrogens {
        let fillable = std::mem::take(&mut p.fillable);
        p.gb.fill_hydrogens(&fillable);
    }
    let end = p.src.len();
    p.gb.finish().map_err(|e| ParseError {
        offset: end,
        kind: e.into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Node {
    Atom(usize),
    Ring(usize),
    Placeholder(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Link {
    Continue,
    Branch,
}

struct RingState {
    carbons: [usize; 6],
    exit: usize,
    used: [bool; 6],
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    gb: GraphBuilder,
    rings: Vec<RingState>,
    fillable: Vec<usize>,
    closures: BTreeMap<u32, (usize, Option<BondOrder>, usize)>,
    placeholder_offsets: Vec<usize>,
}

impl Parser<'_> {
    fn syntax(&self, offset: usize, msg: &str) -> ParseError {
        ParseError {
            offset,
            kind: ParseErrorKind::Syntax(msg.to_string()),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek_at(&self, ahead: usize) -> Option<u8> {
        self.src.get(self.pos + ahead).copied()
    }

    fn bond_symbol(c: u8) -> Option<BondOrder> {
        match c {
            b'-' => Some(BondOrder::Single),
            b'=' => Some(BondOrder::Double),
            b'#' => Some(BondOrder::Triple),
            _ => None,
        }
    }

    fn chain(&mut self, mut prev: Option<Node>, mut link: Link, in_branch: bool) -> Result<(), ParseError> {
        let start = self.pos;
        let mut saw_unit = false;
        loop {
            let Some(c) = self.peek() else {
                if in_branch {
                    return Err(self.syntax(self.pos, "unclosed branch"));
                }
                break;
            };
            match c {
                b')' => {
                    if !in_branch {
                        return Err(self.syntax(self.pos, "unmatched ')'"));
                    }
                    if !saw_unit {
                        return Err(self.syntax(self.pos, "empty branch"));
                    }
                    break;
                }
                b'(' => {
                    let Some(from) = prev else {
                        return Err(self.syntax(self.pos, "branch without a preceding atom"));
                    };
                    self.pos += 1;
                    self.chain(Some(from), Link::Branch, true)?;
                    // consume ')'
                    self.pos += 1;
                }
                b'0'..=b'9' | b'%' => {
                    self.closure(prev, None)?;
                }
                b'.' if !in_branch => {
                    if prev.is_none() {
                        return Err(self.syntax(self.pos, "'.' without a preceding atom"));
                    }
                    self.pos += 1;
                    if self.peek().is_none() {
                        return Err(self.syntax(self.pos, "expected an atom after '.'"));
                    }
                    prev = None;
                    link = Link::Continue;
                }
                _ => {
                    let bond_offset = self.pos;
                    let bond = Self::bond_symbol(c);
                    if bond.is_some() {
                        self.pos += 1;
                        if matches!(self.peek(), Some(b'0'..=b'9' | b'%')) {
                            self.closure(prev, bond)?;
                            continue;
                        }
                        if self.peek().is_none() || self.peek() == Some(b')') {
                            return Err(self.syntax(self.pos, "dangling bond"));
                        }
                    }
                    let unit_offset = self.pos;
                    let unit = self.unit()?;
                    match prev {
                        Some(from) => {
                            self.link(from, unit, bond.unwrap_or(BondOrder::Single), link, unit_offset)?
                        }
                        None if bond.is_some() => {
                            return Err(self.syntax(bond_offset, "bond without a preceding atom"))
                        }
                        None => {}
                    }
                    link = Link::Continue;
                    prev = Some(unit);
                    saw_unit = true;
                }
            }
        }
        if !saw_unit && !in_branch {
            return Err(self.syntax(start, "expected an atom"));
        }
        Ok(())
    }

    fn closure(&mut self, prev: Option<Node>, bond: Option<BondOrder>) -> Result<(), ParseError> {
        let offset = self.pos;
        let digit = if self.peek() == Some(b'%') {
            let (a, b) = (self.peek_at(1), self.peek_at(2));
            match (a, b) {
                (Some(a @ b'0'..=b'9'), Some(b @ b'0'..=b'9')) => {
                    self.pos += 3;
                    u32::from(a - b'0') * 10 + u32::from(b - b'0')
                }
                _ => return Err(self.syntax(offset, "'%' must be followed by two digits")),
            }
        } else {
            let d = u32::from(self.src[self.pos] - b'0');
            self.pos += 1;
            d
        };
        let Some(Node::Atom(site)) = prev else {
            return Err(self.syntax(offset, "ring marker must follow a plain atom"));
        };
        match self.closures.remove(&digit) {
            None => {
                self.closures.insert(digit, (site, bond, offset));
            }
            Some((other, other_bond, _)) => {
                let order = match (bond, other_bond) {
                    (Some(a), Some(b)) if a != b => {
                        return Err(self.syntax(offset, "conflicting ring-closure bond orders"))
                    }
                    (Some(a), _) | (None, Some(a)) => a,
                    (None, None) => BondOrder::Single,
                };
                self.gb
                    .add_bond(other, site, order)
                    .map_err(|e| ParseError {
                        offset,
                        kind: e.into(),
                    })?;
            }
        }
        Ok(())
    }

    fn unit(&mut self) -> Result<Node, ParseError> {
        let offset = self.pos;
        let c = self.peek().ok_or_else(|| self.syntax(offset, "expected an atom"))?;
        match c {
            b'C' if self.peek_at(1) == Some(b'l') => {
                self.pos += 2;
                Ok(self.plain_atom(Element::Cl))
            }
            b'C' | b'N' | b'O' | b'S' | b'H' => {
                self.pos += 1;
                let el = Element::from_symbol(std::str::from_utf8(&[c]).unwrap()).unwrap();
                Ok(self.plain_atom(el))
            }
            b'c' => self.ring(),
            b'[' => self.bracket(),
            b'A'..=b'Z' => {
                let mut end = self.pos + 1;
                while matches!(self.src.get(end), Some(b'a'..=b'z')) {
                    end += 1;
                }
                let sym = String::from_utf8_lossy(&self.src[self.pos..end]).into_owned();
                Err(ParseError {
                    offset,
                    kind: ParseErrorKind::UnknownElement(sym),
                })
            }
            _ => Err(self.syntax(offset, &format!("unexpected character '{}'", c as char))),
        }
    }

    fn plain_atom(&mut self, el: Element) -> Node {
        let s = self.gb.add_atom(el);
        self.fillable.push(s);
        Node::Atom(s)
    }

    fn ring(&mut self) -> Result<Node, ParseError> {
        let offset = self.pos;
        if self.peek_at(1) != Some(b'6') {
            return Err(self.syntax(offset, "expected ring token 'c6'"));
        }
        self.pos += 2;
        let mut exit = 3;
        if self.peek() == Some(b'<') {
            match (self.peek_at(1), self.peek_at(2)) {
                (Some(d @ b'1'..=b'5'), Some(b'>')) => {
                    exit = usize::from(d - b'0');
                    self.pos += 3;
                }
                _ => return Err(self.syntax(self.pos, "expected '<k>' with k in 1..5")),
            }
        }
        let carbons = self.gb.add_benzene();
        self.fillable.extend_from_slice(&carbons);
        self.rings.push(RingState {
            carbons,
            exit,
            used: [false; 6],
        });
        Ok(Node::Ring(self.rings.len() - 1))
    }

    fn bracket(&mut self) -> Result<Node, ParseError> {
        let open = self.pos;
        let close = self.src[open..]
            .iter()
            .position(|&b| b == b']')
            .map(|p| open + p)
            .ok_or_else(|| self.syntax(open, "unclosed '['"))?;
        let body = &self.src[open + 1..close];
        self.pos = close + 1;
        if body.len() >= 2 && body[1] == b':' {
            let role = GroupRole::from_letter(body[0] as char).ok_or_else(|| {
                self.syntax(open + 1, "placeholder role must be X, Y or R")
            })?;
            let name = &body[2..];
            if name.is_empty() || !name.iter().all(|b| b.is_ascii_alphanumeric()) {
                return Err(self.syntax(open + 3, "placeholder name must be alphanumeric"));
            }
            let idx = self.gb.add_placeholder(Placeholder {
                role,
                name: String::from_utf8_lossy(name).into_owned(),
                neighbors: Vec::new(),
            });
            self.placeholder_offsets.push(open);
            return Ok(Node::Placeholder(idx));
        }
        // element symbol
        let sym_len = match body {
            [b'C', b'l', ..] => 2,
            [c, ..] if c.is_ascii_uppercase() => {
                let mut n = 1;
                while body.get(n).is_some_and(|b| b.is_ascii_lowercase()) {
                    n += 1;
                }
                n
            }
            _ => return Err(self.syntax(open + 1, "expected element symbol")),
        };
        let sym = String::from_utf8_lossy(&body[..sym_len]).into_owned();
        let el = Element::from_symbol(&sym).ok_or(ParseError {
            offset: open + 1,
            kind: ParseErrorKind::UnknownElement(sym),
        })?;
        let mut rest = &body[sym_len..];
        let mut h_count = 0;
        if let [b'H', tail @ ..] = rest {
            h_count = 1;
            rest = tail;
            if !rest.is_empty() {
                let digits = std::str::from_utf8(rest).unwrap_or("");
                h_count = digits
                    .parse::<usize>()
                    .map_err(|_| self.syntax(open + 1 + sym_len, "bad hydrogen count"))?;
                rest = &[];
            }
        }
        if !rest.is_empty() {
            return Err(self.syntax(open + 1 + sym_len, "unexpected bracket content"));
        }
        let s = self.gb.add_atom(el);
        for _ in 0..h_count {
            let h = self.gb.add_atom(Element::H);
            self.gb.add_bond(s, h, BondOrder::Single).expect("fresh sites");
        }
        Ok(Node::Atom(s))
    }

    /// Resolves the concrete site `node` offers for a new bond.
    fn outgoing_site(&mut self, node: Node, link: Link, offset: usize) -> Result<usize, ParseError> {
        match node {
            Node::Atom(s) => Ok(s),
            Node::Ring(r) => {
                let ring = &mut self.rings[r];
                let pos = match link {
                    Link::Continue if !ring.used[ring.exit] => ring.exit,
                    _ => (1..6)
                        .chain(std::iter::once(0))
                        .find(|&p| p != ring.exit && !ring.used[p])
                        .ok_or_else(|| ParseError {
                            offset,
                            kind: ParseErrorKind::Syntax("ring has no free position".into()),
                        })?,
                };
                ring.used[pos] = true;
                Ok(ring.carbons[pos])
            }
            Node::Placeholder(_) => unreachable!("handled by link"),
        }
    }

    fn incoming_site(&mut self, node: Node) -> usize {
        match node {
            Node::Atom(s) => s,
            Node::Ring(r) => {
                self.rings[r].used[0] = true;
                self.rings[r].carbons[0]
            }
            Node::Placeholder(_) => unreachable!("handled by link"),
        }
    }

    fn link(&mut self, from: Node, to: Node, order: BondOrder, link: Link, offset: usize) -> Result<(), ParseError> {
        match (from, to) {
            (Node::Placeholder(_), Node::Placeholder(_)) => {
                Err(self.syntax(offset, "placeholders cannot bond to each other"))
            }
            (Node::Placeholder(p), other) => {
                if order != BondOrder::Single {
                    return Err(self.syntax(offset, "placeholders attach by single bonds"));
                }
                let site = self.incoming_site(other);
                self.gb.placeholder_mut(p).neighbors.push(site);
                Ok(())
            }
            (other, Node::Placeholder(p)) => {
                if order != BondOrder::Single {
                    return Err(self.syntax(offset, "placeholders attach by single bonds"));
                }
                let site = self.outgoing_site(other, link, offset)?;
                self.gb.placeholder_mut(p).neighbors.push(site);
                Ok(())
            }
            (a, b) => {
                let sa = self.outgoing_site(a, link, offset)?;
                let sb = self.incoming_site(b);
                self.gb.add_bond(sa, sb, order).map_err(|e| ParseError {
                    offset,
                    kind: e.into(),
                })
            }
        }
    }
}
