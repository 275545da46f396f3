//! The `.tkb` text format.
//!
//! ```text
//! document   := item*
//! item       := decl | section
//! decl       := ("class" | "role" | "individual") ident ("," ident)* "."
//! section    := ("tbox" | "rbox" | "abox" | "query") ":" statement*
//! tbox stmt  := conj "[=" conj "."
//! rbox stmt  := role "[=" role "." | role "o" role "[=" role "."
//!             | role "&" role "[=" role "." | conj "x" conj "[=" role "."
//!             | role "[=" conj "x" conj "."
//! abox stmt  := unary "(" ident ")" "." | role "(" ident "," ident ")" "."
//! query stmt := name "(" ident ")" "." | "T" "(" name ")" "(" ident ")" "."
//! conj       := unary ("&" unary)*
//! unary      := ident | "Top" | "Bot" | "{" ident "}" | "(" conj ")"
//!             | "T" "(" conj ")" | "Ex" role "." ("Self" | unary)
//! ```

mod lexer;

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

pub use lexer::SourceSpan;
use lexer::{tokenize, Tok};

use crate::model::{Axiom, Concept, ConceptName, IndividualName, KnowledgeBase, NameKind, Query, RoleName, Signature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{span}: syntax error: {message}")]
    Syntax { span: SourceSpan, message: String },
    #[error("{span}: undeclared {kind} `{name}`")]
    UnknownName {
        span: SourceSpan,
        kind: NameKind,
        name: String,
    },
    #[error("{span}: typicality cannot be nested")]
    NestedTypicality { span: SourceSpan },
    #[error("{span}: query concept must be a concept name")]
    ComplexQueryConcept { span: SourceSpan },
    #[error("{span}: typicality is not allowed in a concept product")]
    TypicalityInProduct { span: SourceSpan },
}

impl ParseError {
    pub fn span(&self) -> &SourceSpan {
        match self {
            ParseError::Syntax { span, .. }
            | ParseError::UnknownName { span, .. }
            | ParseError::NestedTypicality { span }
            | ParseError::ComplexQueryConcept { span }
            | ParseError::TypicalityInProduct { span } => span,
        }
    }
}

const KEYWORDS: &[&str] = &[
    "class",
    "role",
    "individual",
    "tbox",
    "rbox",
    "abox",
    "query",
    "T",
    "Ex",
    "Self",
    "Top",
    "Bot",
    "x",
    "o",
];

pub fn is_reserved(word: &str) -> bool {
    KEYWORDS.contains(&word)
}

/// A parsed file: the knowledge base and the queries of its `query:` sections.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub kb: KnowledgeBase,
    pub queries: Vec<Query>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    TBox,
    RBox,
    ABox,
    Query,
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    kinds: HashMap<String, NameKind>,
    doc: Document,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(text: &str, file: &str) -> PResult<Self> {
        let file: Arc<str> = Arc::from(file);
        Ok(Parser {
            toks: tokenize(text, &file)?,
            pos: 0,
            kinds: HashMap::new(),
            doc: Document::default(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1.clone()
    }

    fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ParseError::Syntax {
            span: self.span(),
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {tok}, found {}", self.peek()))
        }
    }

    fn is_keyword(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
    }

    fn eat_keyword(&mut self, word: &str) -> bool {
        if self.is_keyword(word) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, word: &str) -> PResult<()> {
        if self.eat_keyword(word) {
            Ok(())
        } else {
            self.error(format!("expected `{word}`, found {}", self.peek()))
        }
    }

    fn ident(&mut self) -> PResult<(String, SourceSpan)> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_reserved(&s) => {
                let span = self.bump().1;
                Ok((s, span))
            }
            Tok::Ident(s) => self.error(format!("`{s}` is a reserved word")),
            other => self.error(format!("expected a name, found {other}")),
        }
    }

    fn name_of_kind(&mut self, kind: NameKind) -> PResult<String> {
        let (name, span) = self.ident()?;
        match self.kinds.get(&name) {
            Some(k) if *k == kind => Ok(name),
            _ => Err(ParseError::UnknownName { span, kind, name }),
        }
    }

    fn role(&mut self) -> PResult<RoleName> {
        Ok(RoleName::new(self.name_of_kind(NameKind::Role)?))
    }

    fn individual(&mut self) -> PResult<IndividualName> {
        Ok(IndividualName::new(self.name_of_kind(NameKind::Individual)?))
    }

    fn peek_is_role(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if self.kinds.get(s) == Some(&NameKind::Role))
    }

    fn declare(&mut self, kind: NameKind, name: String, span: SourceSpan) -> PResult<()> {
        match self.kinds.get(&name) {
            Some(k) if *k != kind => {
                return Err(ParseError::Syntax {
                    span,
                    message: format!("`{name}` is already declared as a {k}"),
                })
            }
            _ => {}
        }
        self.kinds.insert(name.clone(), kind);
        let sig = &mut self.doc.kb.signature;
        match kind {
            NameKind::Concept => sig.declare_concept(name.as_str()),
            NameKind::Role => sig.declare_role(name.as_str()),
            NameKind::Individual => sig.declare_individual(name.as_str()),
        }
        Ok(())
    }

    fn load_signature(&mut self, sig: &Signature) {
        for c in &sig.concepts {
            self.kinds.insert(c.to_string(), NameKind::Concept);
        }
        for r in &sig.roles {
            self.kinds.insert(r.to_string(), NameKind::Role);
        }
        for a in &sig.individuals {
            self.kinds.insert(a.to_string(), NameKind::Individual);
        }
    }

    fn document(&mut self) -> PResult<()> {
        let mut section = Section::None;
        while *self.peek() != Tok::Eof {
            let decl = match self.peek() {
                Tok::Ident(s) if *self.peek_at(1) != Tok::Colon => match s.as_str() {
                    "class" => Some(NameKind::Concept),
                    "role" => Some(NameKind::Role),
                    "individual" => Some(NameKind::Individual),
                    _ => None,
                },
                _ => None,
            };
            if let Some(kind) = decl {
                self.bump();
                loop {
                    let (name, span) = self.ident()?;
                    self.declare(kind, name, span)?;
                    if *self.peek() == Tok::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
                self.expect(Tok::Dot)?;
                continue;
            }
            if *self.peek_at(1) == Tok::Colon {
                let next = match self.peek() {
                    Tok::Ident(s) => match s.as_str() {
                        "tbox" => Some(Section::TBox),
                        "rbox" => Some(Section::RBox),
                        "abox" => Some(Section::ABox),
                        "query" => Some(Section::Query),
                        _ => None,
                    },
                    _ => None,
                };
                if let Some(next) = next {
                    self.bump();
                    self.bump();
                    section = next;
                    continue;
                }
            }
            match section {
                Section::None => {
                    return self.error(format!(
                        "expected a declaration or a section header, found {}",
                        self.peek()
                    ))
                }
                Section::TBox => {
                    let lhs = self.conj(false)?;
                    self.expect(Tok::Sub)?;
                    let rhs = self.conj(false)?;
                    self.expect(Tok::Dot)?;
                    self.doc.kb.tbox.push(Axiom::ConceptInclusion(lhs, rhs));
                }
                Section::RBox => {
                    let ax = self.rbox_axiom()?;
                    self.expect(Tok::Dot)?;
                    self.doc.kb.rbox.push(ax);
                }
                Section::ABox => {
                    let ax = self.assertion()?;
                    self.expect(Tok::Dot)?;
                    self.doc.kb.abox.push(ax);
                }
                Section::Query => {
                    let q = self.query()?;
                    self.expect(Tok::Dot)?;
                    self.doc.queries.push(q);
                }
            }
        }
        Ok(())
    }

    fn conj(&mut self, in_typ: bool) -> PResult<Concept> {
        let mut c = self.unary(in_typ)?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let r = self.unary(in_typ)?;
            c = Concept::conj(c, r);
        }
        Ok(c)
    }

    fn unary(&mut self, in_typ: bool) -> PResult<Concept> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let c = self.conj(in_typ)?;
                self.expect(Tok::RParen)?;
                Ok(c)
            }
            Tok::LBrace => {
                self.bump();
                let a = self.individual()?;
                self.expect(Tok::RBrace)?;
                Ok(Concept::Nominal(a))
            }
            Tok::Ident(s) => match s.as_str() {
                "Top" => {
                    self.bump();
                    Ok(Concept::Top)
                }
                "Bot" => {
                    self.bump();
                    Ok(Concept::Bot)
                }
                "T" => {
                    if in_typ {
                        return Err(ParseError::NestedTypicality { span: self.span() });
                    }
                    self.bump();
                    self.expect(Tok::LParen)?;
                    let arg = self.conj(true)?;
                    self.expect(Tok::RParen)?;
                    Ok(Concept::typ(arg))
                }
                "Ex" => {
                    self.bump();
                    let role = self.role()?;
                    self.expect(Tok::Dot)?;
                    if self.eat_keyword("Self") {
                        Ok(Concept::SelfRestriction(role))
                    } else {
                        let filler = self.unary(in_typ)?;
                        Ok(Concept::Exists(role, Box::new(filler)))
                    }
                }
                _ => Ok(Concept::Atom(ConceptName::new(self.name_of_kind(NameKind::Concept)?))),
            },
            other => self.error(format!("expected a concept, found {other}")),
        }
    }

    /// A concept of a product, rejecting typicality.
    fn product_concept(&mut self) -> PResult<Concept> {
        let span = self.span();
        let c = self.conj(false)?;
        if c.contains_typ() {
            return Err(ParseError::TypicalityInProduct { span });
        }
        Ok(c)
    }

    fn rbox_axiom(&mut self) -> PResult<Axiom> {
        if self.peek_is_role() {
            let r = self.role()?;
            match self.peek() {
                Tok::Sub => {
                    self.bump();
                    if self.peek_is_role() && *self.peek_at(1) == Tok::Dot {
                        return Ok(Axiom::RoleInclusion(r, self.role()?));
                    }
                    let c = self.product_concept()?;
                    self.expect_keyword("x")?;
                    let d = self.product_concept()?;
                    Ok(Axiom::ConceptProductRhs(r, c, d))
                }
                Tok::Amp => {
                    self.bump();
                    let s = self.role()?;
                    self.expect(Tok::Sub)?;
                    Ok(Axiom::RoleConj(r, s, self.role()?))
                }
                Tok::Ident(s) if s == "o" => {
                    self.bump();
                    let s = self.role()?;
                    self.expect(Tok::Sub)?;
                    Ok(Axiom::RoleChain(r, s, self.role()?))
                }
                other => self.error(format!("expected `[=`, `o` or `&`, found {other}")),
            }
        } else {
            let c = self.product_concept()?;
            self.expect_keyword("x")?;
            let d = self.product_concept()?;
            self.expect(Tok::Sub)?;
            Ok(Axiom::ConceptProductLhs(c, d, self.role()?))
        }
    }

    fn assertion(&mut self) -> PResult<Axiom> {
        if self.peek_is_role() && *self.peek_at(1) == Tok::LParen {
            let r = self.role()?;
            self.expect(Tok::LParen)?;
            let a = self.individual()?;
            self.expect(Tok::Comma)?;
            let b = self.individual()?;
            self.expect(Tok::RParen)?;
            return Ok(Axiom::RoleAssertion(r, a, b));
        }
        let c = self.unary(false)?;
        self.expect(Tok::LParen)?;
        let a = self.individual()?;
        self.expect(Tok::RParen)?;
        Ok(Axiom::ConceptAssertion(c, a))
    }

    fn query(&mut self) -> PResult<Query> {
        let span = self.span();
        if self.peek_is_role() {
            return self.error("role assertions cannot be queried");
        }
        let c = self.unary(false)?;
        self.expect(Tok::LParen)?;
        let individual = self.individual()?;
        self.expect(Tok::RParen)?;
        let name = |c: &Concept| match c {
            Concept::Bot => Some(ConceptName::bot()),
            c => c.as_atomic(),
        };
        match &c {
            Concept::Typ(arg) => match name(arg) {
                Some(concept) => Ok(Query::Typ { individual, concept }),
                None => Err(ParseError::ComplexQueryConcept { span }),
            },
            c => match name(c) {
                Some(concept) => Ok(Query::Inst { individual, concept }),
                None => Err(ParseError::ComplexQueryConcept { span }),
            },
        }
    }
}

/// Parses a whole file; `file` labels error spans.
pub fn parse_document(text: &str, file: &str) -> Result<Document, ParseError> {
    let mut p = Parser::new(text, file)?;
    p.document()?;
    Ok(p.doc)
}

pub fn parse_kb(text: &str) -> Result<KnowledgeBase, ParseError> {
    parse_document(text, "<input>").map(|d| d.kb)
}

/// Parses a single query over the names of `signature`. The `query:` prefix
/// and the final `.` are optional.
pub fn parse_query(text: &str, signature: &Signature) -> Result<Query, ParseError> {
    let mut p = Parser::new(text, "<query>")?;
    p.load_signature(signature);
    if p.is_keyword("query") && *p.peek_at(1) == Tok::Colon {
        p.bump();
        p.bump();
    }
    let q = p.query()?;
    if *p.peek() == Tok::Dot {
        p.bump();
    }
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {} after query", p.peek()));
    }
    Ok(q)
}

fn write_names<'a>(out: &mut String, keyword: &str, names: impl Iterator<Item = &'a str>) {
    let names: Vec<&str> = names.collect();
    if !names.is_empty() {
        let _ = writeln!(out, "{keyword} {}.", names.join(", "));
    }
}

fn write_section(out: &mut String, header: &str, items: impl Iterator<Item = String>) {
    let items: Vec<String> = items.collect();
    if !items.is_empty() {
        let _ = writeln!(out, "\n{header}:");
        for item in items {
            let _ = writeln!(out, "  {item}.");
        }
    }
}

pub fn print_kb(kb: &KnowledgeBase) -> String {
    print_document(kb, &[])
}

pub fn print_document(kb: &KnowledgeBase, queries: &[Query]) -> String {
    let mut out = String::from("# typik knowledge base\n");
    let sig = &kb.signature;
    write_names(&mut out, "class", sig.concepts.iter().map(ConceptName::as_str));
    write_names(&mut out, "role", sig.roles.iter().map(RoleName::as_str));
    write_names(
        &mut out,
        "individual",
        sig.individuals.iter().map(IndividualName::as_str),
    );
    write_section(&mut out, "tbox", kb.tbox.iter().map(Axiom::to_string));
    write_section(&mut out, "rbox", kb.rbox.iter().map(Axiom::to_string));
    write_section(&mut out, "abox", kb.abox.iter().map(Axiom::to_string));
    write_section(&mut out, "query", queries.iter().map(Query::to_string));
    out
}
