use std::fmt;
use std::sync::Arc;

/// A concept, role or individual name.
///
/// Names are cheap to clone and order lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: impl AsRef<str>) -> Self {
        Name(Arc::from(s.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

/// An EL⊥ concept.
///
/// Equality and ordering are syntactic. The derived ordering puts concept
/// names before conjunctions and conjunctions before existential
/// restrictions, which is the order in which label sets are rendered.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Concept {
    Top,
    Bottom,
    Name(Name),
    And(Box<Concept>, Box<Concept>),
    Exists(Name, Box<Concept>),
}

impl Concept {
    pub fn name(n: impl AsRef<str>) -> Self {
        Concept::Name(Name::new(n))
    }

    pub fn and(left: Concept, right: Concept) -> Self {
        Concept::And(Box::new(left), Box::new(right))
    }

    pub fn exists(role: impl AsRef<str>, filler: Concept) -> Self {
        Concept::Exists(Name::new(role), Box::new(filler))
    }

    /// Right-associated conjunction of `parts`; `Top` when empty.
    pub fn conjunction<I>(parts: I) -> Self
    where
        I: IntoIterator<Item = Concept>,
        I::IntoIter: DoubleEndedIterator,
    {
        let mut iter = parts.into_iter().rev();
        match iter.next() {
            None => Concept::Top,
            Some(last) => iter.fold(last, |acc, c| Concept::and(c, acc)),
        }
    }

    pub fn is_name(&self) -> bool {
        matches!(self, Concept::Name(_))
    }

    pub fn as_name(&self) -> Option<&Name> {
        match self {
            Concept::Name(n) => Some(n),
            _ => None,
        }
    }

    /// Maximal nesting depth of existential restrictions.
    pub fn role_depth(&self) -> usize {
        match self {
            Concept::Top | Concept::Bottom | Concept::Name(_) => 0,
            Concept::And(l, r) => l.role_depth().max(r.role_depth()),
            Concept::Exists(_, c) => 1 + c.role_depth(),
        }
    }

    /// Top-level conjuncts, flattening nested conjunctions.
    pub fn conjuncts(&self) -> Vec<&Concept> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(c) = stack.pop() {
            match c {
                Concept::And(l, r) => {
                    stack.push(r);
                    stack.push(l);
                }
                other => out.push(other),
            }
        }
        out
    }

    /// Visits this concept and every subterm, parents before children.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a Concept)) {
        f(self);
        match self {
            Concept::And(l, r) => {
                l.walk(f);
                r.walk(f);
            }
            Concept::Exists(_, c) => c.walk(f),
            _ => {}
        }
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Concept::Top => f.write_str("Top"),
            Concept::Bottom => f.write_str("Bottom"),
            Concept::Name(n) => write!(f, "{n}"),
            Concept::And(l, r) => write!(f, "({l} and {r})"),
            Concept::Exists(r, c) => write!(f, "(some {r}. {c})"),
        }
    }
}

impl fmt::Debug for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A node of an ABox: either a named individual or a variable introduced
/// during revision.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeId {
    Individual(Name),
    Variable(u32),
}

impl NodeId {
    pub fn individual(n: impl AsRef<str>) -> Self {
        NodeId::Individual(Name::new(n))
    }

    pub fn is_variable(&self) -> bool {
        matches!(self, NodeId::Variable(_))
    }

    pub fn is_individual(&self) -> bool {
        matches!(self, NodeId::Individual(_))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeId::Individual(n) => write!(f, "{n}"),
            NodeId::Variable(i) => write!(f, "?x{i}"),
        }
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A general concept inclusion `lhs ⊑ rhs`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gci {
    pub lhs: Concept,
    pub rhs: Concept,
}

impl Gci {
    pub fn new(lhs: Concept, rhs: Concept) -> Self {
        Gci { lhs, rhs }
    }
}

impl fmt::Display for Gci {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} SubClassOf {}", self.lhs, self.rhs)
    }
}

impl fmt::Debug for Gci {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A concept assertion `C(x)` or a role assertion `r(x, y)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Assertion {
    Concept(Concept, NodeId),
    Role(Name, NodeId, NodeId),
}

impl Assertion {
    pub fn concept(c: Concept, subject: NodeId) -> Self {
        Assertion::Concept(c, subject)
    }

    pub fn role(r: impl AsRef<str>, subject: NodeId, object: NodeId) -> Self {
        Assertion::Role(Name::new(r), subject, object)
    }

    pub fn is_role(&self) -> bool {
        matches!(self, Assertion::Role(..))
    }

    pub fn mentions_variable(&self) -> bool {
        match self {
            Assertion::Concept(_, x) => x.is_variable(),
            Assertion::Role(_, x, y) => x.is_variable() || y.is_variable(),
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = &NodeId> {
        let (a, b) = match self {
            Assertion::Concept(_, x) => (x, None),
            Assertion::Role(_, x, y) => (x, Some(y)),
        };
        std::iter::once(a).chain(b)
    }

    /// Applies `f` to every node mentioned by the assertion.
    pub fn map_nodes(&self, mut f: impl FnMut(&NodeId) -> NodeId) -> Assertion {
        match self {
            Assertion::Concept(c, x) => Assertion::Concept(c.clone(), f(x)),
            Assertion::Role(r, x, y) => Assertion::Role(r.clone(), f(x), f(y)),
        }
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::Concept(c, x) => write!(f, "{c}({x})"),
            Assertion::Role(r, x, y) => write!(f, "{r}({x}, {y})"),
        }
    }
}

impl fmt::Debug for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
