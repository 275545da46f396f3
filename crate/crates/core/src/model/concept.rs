use std::fmt;

use super::names::{ConceptName, IndividualName, RoleName};

/// An (extended) concept. Conjunction is an ordered pair: `A & B` and
/// `B & A` are different concepts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Concept {
    Atom(ConceptName),
    Top,
    Bot,
    Nominal(IndividualName),
    Conj(Box<Concept>, Box<Concept>),
    Exists(RoleName, Box<Concept>),
    SelfRestriction(RoleName),
    Typ(Box<Concept>),
}

impl Concept {
    /// Builds the concept for a name, mapping the reserved names to `Top`/`Bot`.
    pub fn name(name: impl Into<ConceptName>) -> Concept {
        let name = name.into();
        if name.is_top() {
            Concept::Top
        } else if name.is_bot() {
            Concept::Bot
        } else {
            Concept::Atom(name)
        }
    }

    pub fn atom(name: &str) -> Concept {
        Concept::name(ConceptName::new(name))
    }

    pub fn nominal(individual: &str) -> Concept {
        Concept::Nominal(IndividualName::new(individual))
    }

    pub fn conj(left: Concept, right: Concept) -> Concept {
        Concept::Conj(Box::new(left), Box::new(right))
    }

    /// Left-nested conjunction of a non-empty list; `Top` for an empty one.
    pub fn conj_all(parts: impl IntoIterator<Item = Concept>) -> Concept {
        parts.into_iter().reduce(Concept::conj).unwrap_or(Concept::Top)
    }

    pub fn exists(role: &str, filler: Concept) -> Concept {
        Concept::Exists(RoleName::new(role), Box::new(filler))
    }

    pub fn self_restriction(role: &str) -> Concept {
        Concept::SelfRestriction(RoleName::new(role))
    }

    pub fn typ(arg: Concept) -> Concept {
        Concept::Typ(Box::new(arg))
    }

    /// The concept name of `Atom` or `Top`; these are the atomic positions of
    /// the normal form.
    pub fn as_atomic(&self) -> Option<ConceptName> {
        match self {
            Concept::Atom(n) => Some(n.clone()),
            Concept::Top => Some(ConceptName::top()),
            _ => None,
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Concept::Atom(_) | Concept::Top)
    }

    pub fn contains_typ(&self) -> bool {
        match self {
            Concept::Typ(_) => true,
            Concept::Conj(l, r) => l.contains_typ() || r.contains_typ(),
            Concept::Exists(_, f) => f.contains_typ(),
            _ => false,
        }
    }

    pub fn contains_bot(&self) -> bool {
        match self {
            Concept::Bot => true,
            Concept::Conj(l, r) => l.contains_bot() || r.contains_bot(),
            Concept::Exists(_, f) | Concept::Typ(f) => f.contains_bot(),
            _ => false,
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Concept::Conj(l, r) => 1 + l.size() + r.size(),
            Concept::Exists(_, f) | Concept::Typ(f) => 1 + f.size(),
            _ => 1,
        }
    }

    /// Calls `f` on every node in pre-order, left to right.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Concept)) {
        f(self);
        match self {
            Concept::Conj(l, r) => {
                l.visit(f);
                r.visit(f);
            }
            Concept::Exists(_, c) | Concept::Typ(c) => c.visit(f),
            _ => {}
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, unary: bool) -> fmt::Result {
        match self {
            Concept::Atom(n) => write!(f, "{n}"),
            Concept::Top => f.write_str("Top"),
            Concept::Bot => f.write_str("Bot"),
            Concept::Nominal(a) => write!(f, "{{{a}}}"),
            Concept::Conj(l, r) => {
                if unary {
                    f.write_str("(")?;
                }
                l.fmt_prec(f, false)?;
                f.write_str(" & ")?;
                r.fmt_prec(f, true)?;
                if unary {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Concept::Exists(role, filler) => {
                write!(f, "Ex {role}.")?;
                filler.fmt_prec(f, true)
            }
            Concept::SelfRestriction(role) => write!(f, "Ex {role}.Self"),
            Concept::Typ(arg) => {
                f.write_str("T(")?;
                arg.fmt_prec(f, false)?;
                f.write_str(")")
            }
        }
    }

    /// Displays the concept so that it can be followed by `(a)` in an
    /// assertion.
    pub fn display_unary(&self) -> impl fmt::Display + '_ {
        Unary(self)
    }
}

struct Unary<'a>(&'a Concept);

impl fmt::Display for Unary<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            // `Ex R.A(a)` would read back the same, but parentheses are clearer.
            Concept::Exists(..) => write!(f, "({})", self.0),
            c => c.fmt_prec(f, true),
        }
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reserved_names_map_to_constants() {
        assert_eq!(Concept::atom("Top"), Concept::Top);
        assert_eq!(Concept::atom("Bot"), Concept::Bot);
        assert_eq!(Concept::Top.as_atomic(), Some(ConceptName::top()));
        assert_eq!(Concept::Bot.as_atomic(), None);
    }

    #[test]
    fn display_parenthesizes_nested_conjunction() {
        let c = Concept::conj(
            Concept::atom("A"),
            Concept::conj(Concept::atom("B"), Concept::atom("C")),
        );
        assert_eq!(c.to_string(), "A & (B & C)");
        let e = Concept::exists("R", Concept::conj(Concept::atom("A"), Concept::Top));
        assert_eq!(e.to_string(), "Ex R.(A & Top)");
        assert_eq!(Concept::typ(e.clone()).to_string(), "T(Ex R.(A & Top))");
        assert_eq!(e.display_unary().to_string(), "(Ex R.(A & Top))");
    }

    #[test]
    fn conjunction_is_ordered() {
        let ab = Concept::conj(Concept::atom("A"), Concept::atom("B"));
        let ba = Concept::conj(Concept::atom("B"), Concept::atom("A"));
        assert_ne!(ab, ba);
        assert_eq!(Concept::conj_all(vec![]), Concept::Top);
    }
}
