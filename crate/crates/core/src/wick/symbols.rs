//! Formal operator symbols and ordered products.
//!
//! A [`Product`] is a left-to-right sequence of field symbols; the rightmost
//! symbol acts first on the ket. Positions are formal variable names, bound
//! to lattice sites only at evaluation time. Composite symbols carry a level
//! label in brackets.

use std::fmt;

use super::WickError;

/// The six field kinds: elementary fermions of either species, the composite
/// pair field, and their adjoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OpKind {
    Psi1,
    Psi2,
    Psi1Dag,
    Psi2Dag,
    Phi,
    PhiDag,
}

impl OpKind {
    /// True for the three adjoint kinds.
    pub fn is_creator(self) -> bool {
        matches!(self, OpKind::Psi1Dag | OpKind::Psi2Dag | OpKind::PhiDag)
    }

    /// True for the composite pair field and its adjoint.
    pub fn is_composite(self) -> bool {
        matches!(self, OpKind::Phi | OpKind::PhiDag)
    }

    fn token(self) -> &'static str {
        match self {
            OpKind::Psi1 => "psi1",
            OpKind::Psi2 => "psi2",
            OpKind::Psi1Dag => "psi1+",
            OpKind::Psi2Dag => "psi2+",
            OpKind::Phi => "phi",
            OpKind::PhiDag => "phi+",
        }
    }
}

/// One symbol in a product: kind, formal position variable, level label for
/// composites, and the slot it occupies in the product.
#[derive(Clone, Debug)]
pub struct OpSymbol {
    pub kind: OpKind,
    pub arg: String,
    pub label: Option<String>,
    pub slot: usize,
}

impl fmt::Display for OpSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.kind, &self.label) {
            (OpKind::Phi, Some(l)) => write!(f, "phi[{}]({})", l, self.arg),
            (OpKind::PhiDag, Some(l)) => write!(f, "phi+[{}]({})", l, self.arg),
            (kind, _) => write!(f, "{}({})", kind.token(), self.arg),
        }
    }
}

/// An ordered product of field symbols.
#[derive(Clone, Debug, Default)]
pub struct Product {
    pub symbols: Vec<OpSymbol>,
}

impl Product {
    pub fn new() -> Self {
        Product { symbols: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Appends an elementary symbol; panics on composite kinds, which need a
    /// label and go through [`Product::push_composite`].
    pub fn push(&mut self, kind: OpKind, arg: &str) -> &mut Self {
        assert!(!kind.is_composite(), "composite symbols need a label");
        let slot = self.symbols.len();
        self.symbols.push(OpSymbol { kind, arg: arg.to_string(), label: None, slot });
        self
    }

    /// Appends a composite symbol with its level label.
    pub fn push_composite(&mut self, kind: OpKind, label: &str, arg: &str) -> &mut Self {
        assert!(kind.is_composite(), "elementary symbols carry no label");
        let slot = self.symbols.len();
        self.symbols.push(OpSymbol {
            kind,
            arg: arg.to_string(),
            label: Some(label.to_string()),
            slot,
        });
        self
    }

    /// Parses a whitespace-separated product like
    /// `psi1(x) psi2+(y) phi[a](z) phi+[b](w)`.
    pub fn parse(text: &str) -> Result<Product, WickError> {
        let mut product = Product::new();
        for token in text.split_whitespace() {
            let (kind, rest) = strip_kind(token)?;
            if kind.is_composite() {
                let (label, rest) = strip_bracketed(rest, '[', ']', token)?;
                let arg = strip_parenthesized(rest, token)?;
                product.push_composite(kind, &label, &arg);
            } else {
                let arg = strip_parenthesized(rest, token)?;
                product.push(kind, &arg);
            }
        }
        Ok(product)
    }
}

impl fmt::Display for Product {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, sym) in self.symbols.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{sym}")?;
        }
        Ok(())
    }
}

fn strip_kind(token: &str) -> Result<(OpKind, &str), WickError> {
    for kind in [
        OpKind::Psi1Dag,
        OpKind::Psi2Dag,
        OpKind::PhiDag,
        OpKind::Psi1,
        OpKind::Psi2,
        OpKind::Phi,
    ] {
        if let Some(rest) = token.strip_prefix(kind.token()) {
            return Ok((kind, rest));
        }
    }
    Err(WickError::Parse(format!(
        "unknown operator in '{token}'; expected psi1, psi2, phi, or a daggered form"
    )))
}

fn strip_bracketed<'a>(
    rest: &'a str,
    open: char,
    close: char,
    token: &str,
) -> Result<(String, &'a str), WickError> {
    let inner = rest
        .strip_prefix(open)
        .ok_or_else(|| WickError::Parse(format!("missing '{open}' in '{token}'")))?;
    let end = inner
        .find(close)
        .ok_or_else(|| WickError::Parse(format!("missing '{close}' in '{token}'")))?;
    let body = &inner[..end];
    if body.is_empty() || !body.chars().all(|c| c.is_alphanumeric() || c == '_') {
        return Err(WickError::Parse(format!("bad label in '{token}'")));
    }
    Ok((body.to_string(), &inner[end + 1..]))
}

fn strip_parenthesized(rest: &str, token: &str) -> Result<String, WickError> {
    let (body, tail) = strip_bracketed(rest, '(', ')', token)?;
    if !tail.is_empty() {
        return Err(WickError::Parse(format!("trailing text after '{token}'")));
    }
    Ok(body)
}
