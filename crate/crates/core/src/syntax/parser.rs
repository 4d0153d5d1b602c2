use super::lexer::{tokenize, Tok, Token};
use super::{ErrorCode, ParseError, SourceSpan};
use crate::fo::Formula;
use crate::model::{
    Atom, Conjunction, Cq, Database, Dependency, Fact, FactSet, Inequality, Schema, Sym, Term, Ucq,
};

const KEYWORDS: &[&str] = &["forall", "exists", "false", "true"];
const SECTIONS: &[&str] = &["schema", "dependencies", "database", "query"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Section {
    Schema,
    Dependencies,
    Database,
    Query,
}

/// Everything a (possibly multi-section) input file can contain.
#[derive(Clone, Debug, Default)]
pub struct Document {
    pub schema: Schema,
    pub dependencies: Vec<Dependency>,
    pub database: Option<FactSet>,
    pub query: Option<Ucq>,
}

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
    schema: Schema,
    /// Reject predicates missing from the schema instead of inferring them.
    strict: bool,
}

type PResult<T> = Result<T, ParseError>;

fn is_ident(w: &str) -> bool {
    w.chars()
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
}

impl Parser {
    pub fn new(src: &str, schema: Schema, strict: bool) -> PResult<Self> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
            schema,
            strict,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Word(x) if x == w)
    }

    fn err<T>(&self, code: ErrorCode, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError::new(self.span(), code, msg))
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        self.err(
            ErrorCode::Syntax,
            format!("expected {wanted}, found {}", self.peek().describe()),
        )
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> PResult<Token> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            self.unexpected(wanted)
        }
    }

    fn word(&mut self, wanted: &str) -> PResult<(String, SourceSpan)> {
        match self.peek().clone() {
            Tok::Word(w) => {
                let sp = self.bump().span;
                Ok((w, sp))
            }
            _ => self.unexpected(wanted),
        }
    }

    fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    fn at_section_header(&self) -> Option<Section> {
        match (self.peek(), self.peek_at(1)) {
            (Tok::Word(w), Tok::Colon) if SECTIONS.contains(&w.as_str()) => {
                Some(match w.as_str() {
                    "schema" => Section::Schema,
                    "dependencies" => Section::Dependencies,
                    "database" => Section::Database,
                    _ => Section::Query,
                })
            }
            _ => None,
        }
    }

    // -- documents -------------------------------------------------------

    pub fn document(&mut self, default: Section) -> PResult<Document> {
        let mut doc = Document::default();
        let mut section = default;
        while !self.at_eof() {
            if let Some(s) = self.at_section_header() {
                self.bump();
                self.bump();
                section = s;
                if s == Section::Database {
                    doc.database.get_or_insert_with(FactSet::new);
                }
                continue;
            }
            match section {
                Section::Schema => self.declaration()?,
                Section::Dependencies => {
                    if *self.peek_at(1) == Tok::Slash {
                        self.declaration()?;
                    } else {
                        let d = self.dependency()?;
                        doc.dependencies.push(d);
                    }
                }
                Section::Database => {
                    let f = self.fact()?;
                    doc.database.get_or_insert_with(FactSet::new).insert(f);
                }
                Section::Query => {
                    if doc.query.is_some() {
                        return self.err(ErrorCode::Syntax, "only one query may be given");
                    }
                    let q = self.ucq()?;
                    if *self.peek() == Tok::Dot {
                        self.bump();
                    }
                    doc.query = Some(q);
                }
            }
        }
        doc.schema = self.schema.clone();
        Ok(doc)
    }

    fn declaration(&mut self) -> PResult<()> {
        let (name, sp) = self.word("a predicate name")?;
        if !is_ident(&name) || KEYWORDS.contains(&name.as_str()) {
            return Err(ParseError::new(
                sp,
                ErrorCode::Syntax,
                format!("`{name}` is not a valid predicate name"),
            ));
        }
        self.expect(Tok::Slash, "`/`")?;
        let (n, nsp) = self.word("an arity")?;
        let arity: usize = n.parse().map_err(|_| {
            ParseError::new(nsp, ErrorCode::Syntax, format!("`{n}` is not an arity"))
        })?;
        self.note_arity(&name, arity, sp, true)?;
        if matches!(self.peek(), Tok::Dot | Tok::Comma) {
            self.bump();
        }
        Ok(())
    }

    fn note_arity(&mut self, pred: &str, n: usize, sp: SourceSpan, declaring: bool) -> PResult<()> {
        let p = Sym::new(pred);
        match self.schema.arity(&p) {
            Some(m) if m != n => Err(ParseError::new(
                sp,
                ErrorCode::Arity,
                format!("predicate {pred} has arity {m}, used with {n} arguments"),
            )),
            Some(_) => Ok(()),
            None if self.strict && !declaring => Err(ParseError::new(
                sp,
                ErrorCode::UnknownPredicate,
                format!("unknown predicate {pred}"),
            )),
            None => {
                self.schema
                    .declare(&p, n)
                    .expect("fresh predicate declaration cannot clash");
                Ok(())
            }
        }
    }

    // -- dependencies ----------------------------------------------------

    fn var_list(&mut self, outer: &[Sym]) -> PResult<Vec<(Sym, SourceSpan)>> {
        let mut vars: Vec<(Sym, SourceSpan)> = Vec::new();
        loop {
            let (w, sp) = self.word("a variable")?;
            if !is_ident(&w) || KEYWORDS.contains(&w.as_str()) {
                return Err(ParseError::new(
                    sp,
                    ErrorCode::Syntax,
                    format!("`{w}` cannot be used as a variable"),
                ));
            }
            let v = Sym::new(&w);
            if vars.iter().any(|(x, _)| *x == v) || outer.contains(&v) {
                return Err(ParseError::new(
                    sp,
                    ErrorCode::DuplicateDecl,
                    format!("variable {w} is declared twice"),
                ));
            }
            vars.push((v, sp));
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        self.expect(Tok::Colon, "`:` after the variable list")?;
        Ok(vars)
    }

    fn dependency(&mut self) -> PResult<Dependency> {
        let mut decl = Vec::new();
        if self.at_word("forall") {
            self.bump();
            decl = self.var_list(&[])?;
        }
        let forall: Vec<Sym> = decl.iter().map(|(v, _)| v.clone()).collect();
        let mut consts = Vec::new();
        let body = self.literals(&forall, &mut consts)?;
        if body.atoms.is_empty() {
            return self.err(
                ErrorCode::Safety,
                "a dependency body needs a predicate atom",
            );
        }
        let pvars = body.atom_vars();
        for (v, sp) in &decl {
            if !pvars.contains(v) {
                return Err(ParseError::new(
                    *sp,
                    ErrorCode::Safety,
                    format!("variable {v} must occur in a body atom"),
                ));
            }
        }
        self.expect(Tok::Arrow, "`->`")?;
        let head = if self.at_word("false") && *self.peek_at(1) == Tok::Dot {
            self.bump();
            Ucq::bot()
        } else {
            let mut qs = vec![self.cq(&forall)?];
            while *self.peek() == Tok::Pipe {
                self.bump();
                qs.push(self.cq(&forall)?);
            }
            Ucq::new(qs)
        };
        self.expect(Tok::Dot, "`.` to end the dependency")?;
        Ok(Dependency { forall, body, head })
    }

    /// `[exists vars:] literals`, with `outer` variables in scope.
    fn cq(&mut self, outer: &[Sym]) -> PResult<Cq> {
        let mut decl = Vec::new();
        if self.at_word("exists") {
            self.bump();
            decl = self.var_list(outer)?;
        }
        let exists: Vec<Sym> = decl.iter().map(|(v, _)| v.clone()).collect();
        let scope: Vec<Sym> = outer.iter().chain(&exists).cloned().collect();
        let mut consts = Vec::new();
        let body = self.literals(&scope, &mut consts)?;
        let pvars = body.atom_vars();
        let all = body.vars();
        for (v, sp) in &decl {
            if pvars.contains(v) {
                continue;
            }
            if all.contains(v) {
                return Err(ParseError::new(
                    *sp,
                    ErrorCode::Safety,
                    format!("variable {v} occurs only in inequalities"),
                ));
            }
            // A declared variable that is never used usually means a typo:
            // point at the identifier that was read as a constant instead.
            let (sp, msg) = match consts.first() {
                Some((c, csp)) => (
                    *csp,
                    format!(
                        "`{c}` is not bound by any quantifier (declared variable {v} is unused)"
                    ),
                ),
                None => (*sp, format!("declared variable {v} is unused")),
            };
            return Err(ParseError::new(sp, ErrorCode::UnboundVar, msg));
        }
        Ok(Cq::new(exists, body))
    }

    fn literals(
        &mut self,
        scope: &[Sym],
        consts: &mut Vec<(String, SourceSpan)>,
    ) -> PResult<Conjunction> {
        let mut c = Conjunction::default();
        loop {
            self.literal(scope, consts, &mut c)?;
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                return Ok(c);
            }
        }
    }

    fn term(&mut self, scope: &[Sym], consts: &mut Vec<(String, SourceSpan)>) -> PResult<Term> {
        let (w, sp) = self.word("a term")?;
        if KEYWORDS.contains(&w.as_str()) {
            return Err(ParseError::new(
                sp,
                ErrorCode::Syntax,
                format!("keyword `{w}` cannot be used as a term"),
            ));
        }
        let s = Sym::new(&w);
        if scope.contains(&s) {
            Ok(Term::Var(s))
        } else {
            consts.push((w, sp));
            Ok(Term::Const(s))
        }
    }

    fn literal(
        &mut self,
        scope: &[Sym],
        consts: &mut Vec<(String, SourceSpan)>,
        out: &mut Conjunction,
    ) -> PResult<()> {
        match (self.peek().clone(), self.peek_at(1).clone()) {
            (Tok::Word(w), _) if w == "false" => self.err(
                ErrorCode::Syntax,
                "`false` may only appear on its own as a head or query",
            ),
            (Tok::Word(_), Tok::Neq) => {
                let l = self.term(scope, consts)?;
                self.bump();
                let r = self.term(scope, consts)?;
                out.ineqs.push(Inequality::new(l, r));
                Ok(())
            }
            (Tok::Word(_), Tok::AuxMark) => self.err(
                ErrorCode::Syntax,
                "auxiliary predicates are only allowed in first-order sentences",
            ),
            (Tok::Word(_), _) => {
                let a = self.atom(scope, consts, false)?;
                out.atoms.push(a);
                Ok(())
            }
            _ => self.unexpected("an atom or inequality"),
        }
    }

    fn atom(
        &mut self,
        scope: &[Sym],
        consts: &mut Vec<(String, SourceSpan)>,
        allow_aux: bool,
    ) -> PResult<Atom> {
        let (pred, sp) = self.word("a predicate")?;
        if !is_ident(&pred) || KEYWORDS.contains(&pred.as_str()) {
            return Err(ParseError::new(
                sp,
                ErrorCode::Syntax,
                format!("`{pred}` is not a valid predicate name"),
            ));
        }
        if scope.contains(&Sym::new(&pred)) {
            return Err(ParseError::new(
                sp,
                ErrorCode::Syntax,
                format!("variable {pred} used where an atom is expected"),
            ));
        }
        let mut aux = false;
        if allow_aux && *self.peek() == Tok::AuxMark {
            self.bump();
            aux = true;
        }
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.bump();
            if *self.peek() != Tok::RParen {
                loop {
                    args.push(self.term(scope, consts)?);
                    if *self.peek() == Tok::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
            }
            self.expect(Tok::RParen, "`)`")?;
        }
        self.note_arity(&pred, args.len(), sp, false)?;
        Ok(Atom {
            pred: Sym::new(&pred),
            aux,
            args,
        })
    }

    // -- facts -----------------------------------------------------------

    fn fact(&mut self) -> PResult<Fact> {
        let (pred, sp) = self.word("a fact")?;
        match pred.as_str() {
            "false" => {
                return Err(ParseError::new(
                    sp,
                    ErrorCode::Syntax,
                    "the reserved predicate `false` cannot be stored",
                ))
            }
            "forall" | "exists" => {
                return Err(ParseError::new(
                    sp,
                    ErrorCode::UnboundVar,
                    "facts cannot contain variables",
                ))
            }
            p if !is_ident(p) => {
                return Err(ParseError::new(
                    sp,
                    ErrorCode::Syntax,
                    format!("`{p}` is not a valid predicate name"),
                ))
            }
            _ => {}
        }
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.bump();
            if *self.peek() != Tok::RParen {
                loop {
                    let (w, wsp) = self.word("a constant")?;
                    if KEYWORDS.contains(&w.as_str()) {
                        return Err(ParseError::new(
                            wsp,
                            ErrorCode::Syntax,
                            format!("keyword `{w}` cannot be a constant"),
                        ));
                    }
                    args.push(Sym::new(&w));
                    if *self.peek() == Tok::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
            }
            self.expect(Tok::RParen, "`)`")?;
        }
        self.note_arity(&pred, args.len(), sp, false)?;
        self.expect(Tok::Dot, "`.` to end the fact")?;
        Ok(Fact {
            pred: Sym::new(&pred),
            args,
        })
    }

    // -- queries ---------------------------------------------------------

    pub fn ucq(&mut self) -> PResult<Ucq> {
        if self.at_word("false") && matches!(self.peek_at(1), Tok::Eof | Tok::Dot) {
            self.bump();
            return Ok(Ucq::bot());
        }
        let mut qs = vec![self.cq(&[])?];
        while *self.peek() == Tok::Pipe {
            self.bump();
            qs.push(self.cq(&[])?);
        }
        Ok(Ucq::new(qs))
    }

    pub fn finish(&mut self) -> PResult<()> {
        if self.at_eof() {
            Ok(())
        } else {
            self.unexpected("end of input")
        }
    }

    // -- first-order sentences --------------------------------------------

    pub fn formula(&mut self, scope: &mut Vec<Sym>) -> PResult<Formula> {
        let lhs = self.disjunction(scope)?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula(scope)?;
            return Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self, scope: &mut Vec<Sym>) -> PResult<Formula> {
        let mut parts = vec![self.conjunction(scope)?];
        while *self.peek() == Tok::Pipe {
            self.bump();
            parts.push(self.conjunction(scope)?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().expect("one part")
        } else {
            Formula::Or(parts)
        })
    }

    fn conjunction(&mut self, scope: &mut Vec<Sym>) -> PResult<Formula> {
        let mut parts = vec![self.unary(scope)?];
        while *self.peek() == Tok::Amp {
            self.bump();
            parts.push(self.unary(scope)?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().expect("one part")
        } else {
            Formula::And(parts)
        })
    }

    fn unary(&mut self, scope: &mut Vec<Sym>) -> PResult<Formula> {
        if *self.peek() == Tok::Bang {
            self.bump();
            return Ok(Formula::Not(Box::new(self.unary(scope)?)));
        }
        if self.at_word("exists") || self.at_word("forall") {
            let existential = self.at_word("exists");
            self.bump();
            let mut vars = Vec::new();
            loop {
                let (w, sp) = self.word("a variable")?;
                if !is_ident(&w) || KEYWORDS.contains(&w.as_str()) {
                    return Err(ParseError::new(
                        sp,
                        ErrorCode::Syntax,
                        format!("`{w}` cannot be used as a variable"),
                    ));
                }
                let v = Sym::new(&w);
                if vars.contains(&v) {
                    return Err(ParseError::new(
                        sp,
                        ErrorCode::DuplicateDecl,
                        format!("variable {w} is declared twice"),
                    ));
                }
                vars.push(v);
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
            self.expect(Tok::Colon, "`:` after the variable list")?;
            let mark = scope.len();
            scope.extend(vars.iter().cloned());
            let body = self.unary(scope);
            scope.truncate(mark);
            let body = Box::new(body?);
            return Ok(if existential {
                Formula::Exists(vars, body)
            } else {
                Formula::Forall(vars, body)
            });
        }
        self.primary(scope)
    }

    fn primary(&mut self, scope: &mut Vec<Sym>) -> PResult<Formula> {
        match (self.peek().clone(), self.peek_at(1).clone()) {
            (Tok::LParen, _) => {
                self.bump();
                let f = self.formula(scope)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            (Tok::Word(w), _) if w == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            (Tok::Word(w), _) if w == "false" => {
                self.bump();
                Ok(Formula::False)
            }
            (Tok::Word(_), Tok::Eq) | (Tok::Word(_), Tok::Neq) => {
                let mut sink = Vec::new();
                let l = self.term(scope, &mut sink)?;
                let is_eq = self.bump().tok == Tok::Eq;
                let r = self.term(scope, &mut sink)?;
                Ok(if is_eq {
                    Formula::Eq(l, r)
                } else {
                    Formula::Neq(l, r)
                })
            }
            (Tok::Word(_), _) => {
                let mut sink = Vec::new();
                Ok(Formula::Atom(self.atom(scope, &mut sink, true)?))
            }
            _ => self.unexpected("a formula"),
        }
    }
}

/// Parses a file of schema declarations and dependencies. Other sections, if
/// present, are ignored.
pub fn parse_dependencies(text: &str) -> Result<(Schema, Vec<Dependency>), ParseError> {
    let doc = parse_document(text, Section::Dependencies)?;
    Ok((doc.schema, doc.dependencies))
}

/// Parses a multi-section document; statements before any header belong to
/// `default`.
pub fn parse_document(text: &str, default: Section) -> Result<Document, ParseError> {
    let mut p = Parser::new(text, Schema::new(), false)?;
    p.document(default)
}

/// Parses facts against a schema. Predicates absent from the schema are added
/// with the arity of their first use.
pub fn parse_database(text: &str, schema: &Schema) -> Result<Database, ParseError> {
    let mut p = Parser::new(text, schema.clone(), false)?;
    let doc = p.document(Section::Database)?;
    Ok(Database {
        schema: doc.schema,
        facts: doc.database.unwrap_or_default(),
    })
}

/// Parses a Boolean UCQ whose predicates must all be in `schema`.
pub fn parse_query(text: &str, schema: &Schema) -> Result<Ucq, ParseError> {
    let mut p = Parser::new(text, schema.clone(), true)?;
    if p.at_section_header() == Some(Section::Query) {
        p.bump();
        p.bump();
    }
    let q = p.ucq()?;
    if *p.peek() == Tok::Dot {
        p.bump();
    }
    p.finish()?;
    Ok(q)
}

/// Parses a first-order sentence in the printed syntax.
pub fn parse_fo(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, Schema::new(), false)?;
    let f = p.formula(&mut Vec::new())?;
    p.finish()?;
    Ok(f)
}
