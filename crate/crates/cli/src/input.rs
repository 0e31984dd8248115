//! The line-oriented input format. See `docs/input-format.md` for the
//! grammar; every error carries the line, column and the rule that failed.

use metricomp::cauchy::{small_object_sequence, ObjectSequence};
use metricomp::chain::{ChainSchedule, ChainTail, TailKind};
use metricomp::derived::{ModuleMap, SplitObject};
use metricomp::field::{FieldDescriptor, Scalar};
use metricomp::indec::{Indecomposable, RingDescriptor};
use metricomp::labels::{Label, LabelSet, ProjPoint, Universe};
use metricomp::linalg::Mat;
use metricomp::metric::{Growth, MetricNF, Side};
use metricomp::thick::ThickDescriptor;
use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: expected {rule}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub rule: &'static str,
    pub message: String,
}

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("line {line}: {error}")]
    Library { line: usize, error: metricomp::Error },
}

type PResult<T> = std::result::Result<T, InputError>;

/// How a sequence was declared; `small_object` sequences remember the class
/// they were built for.
#[derive(Debug, Clone)]
pub struct SequenceDecl {
    pub sequence: ObjectSequence,
    pub built_for: Option<ThickDescriptor>,
}

#[derive(Debug, Clone)]
pub struct Document {
    pub ring: RingDescriptor,
    pub metrics: Vec<(String, MetricNF)>,
    pub objects: Vec<(String, SplitObject)>,
    pub maps: Vec<(String, ModuleMap)>,
    pub sequences: Vec<(String, SequenceDecl)>,
}

fn lookup<'a, T>(items: &'a [(String, T)], name: &str) -> Option<&'a T> {
    items.iter().find(|(n, _)| n == name).map(|(_, v)| v)
}

impl Document {
    pub fn metric(&self, name: &str) -> Option<&MetricNF> {
        lookup(&self.metrics, name)
    }

    pub fn object(&self, name: &str) -> Option<&SplitObject> {
        lookup(&self.objects, name)
    }

    pub fn map(&self, name: &str) -> Option<&ModuleMap> {
        lookup(&self.maps, name)
    }

    pub fn sequence(&self, name: &str) -> Option<&SequenceDecl> {
        lookup(&self.sequences, name)
    }
}

struct Cursor<'a> {
    line: usize,
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: usize, text: &'a str) -> Self {
        Cursor { line, text, pos: 0 }
    }

    fn err(&self, rule: &'static str, message: impl Into<String>) -> InputError {
        InputError::Parse(ParseError {
            line: self.line,
            column: self.pos + 1,
            rule,
            message: message.into(),
        })
    }

    fn lib<T>(&self, r: metricomp::Result<T>) -> PResult<T> {
        r.map_err(|error| InputError::Library { line: self.line, error })
    }

    fn ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn at_end(&mut self) -> bool {
        self.ws();
        self.rest().is_empty()
    }

    fn peek(&mut self, s: &str) -> bool {
        self.ws();
        self.rest().starts_with(s)
    }

    /// Consume `s` if it comes next (for words, only as a whole word).
    fn eat(&mut self, s: &str) -> bool {
        self.ws();
        let rest = self.rest();
        if !rest.starts_with(s) {
            return false;
        }
        let word_like = s.chars().all(|c| c.is_alphanumeric() || c == '_');
        if word_like {
            if let Some(c) = rest[s.len()..].chars().next() {
                if c.is_alphanumeric() || c == '_' {
                    return false;
                }
            }
        }
        self.pos += s.len();
        true
    }

    fn expect(&mut self, s: &str, rule: &'static str) -> PResult<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(rule, format!("`{s}`")))
        }
    }

    fn word(&mut self, rule: &'static str) -> PResult<&'a str> {
        self.ws();
        let rest = self.rest();
        let len = rest
            .char_indices()
            .find(|(_, c)| !(c.is_alphanumeric() || *c == '_'))
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 {
            return Err(self.err(rule, "a name"));
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn int(&mut self, rule: &'static str) -> PResult<i64> {
        self.ws();
        let rest = self.rest();
        let sign = usize::from(rest.starts_with('-'));
        let digits = rest[sign..].chars().take_while(char::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.err(rule, "an integer"));
        }
        let s = &rest[..sign + digits];
        let v = s.parse().map_err(|_| self.err(rule, format!("`{s}` is out of range")))?;
        self.pos += sign + digits;
        Ok(v)
    }

    fn nat(&mut self, rule: &'static str) -> PResult<u64> {
        let start = self.pos;
        let v = self.int(rule)?;
        u64::try_from(v).map_err(|_| {
            self.pos = start;
            self.err(rule, "a non-negative integer")
        })
    }

    fn rational(&mut self, rule: &'static str) -> PResult<(i64, i64)> {
        let num = self.int(rule)?;
        if self.rest().starts_with('/') {
            self.pos += 1;
            let den = self.int(rule)?;
            if den == 0 {
                return Err(self.err(rule, "a nonzero denominator"));
            }
            Ok((num, den))
        } else {
            Ok((num, 1))
        }
    }

    fn end(&mut self) -> PResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err("end of line", format!("unexpected `{}`", self.rest())))
        }
    }
}

struct Parser {
    ring: Option<RingDescriptor>,
    default_field: FieldDescriptor,
    doc_thick: Vec<(String, ThickDescriptor)>,
    metrics: Vec<(String, MetricNF)>,
    objects: Vec<(String, SplitObject)>,
    maps: Vec<(String, ModuleMap)>,
    sequences: Vec<(String, SequenceDecl)>,
}

fn parse_field(c: &mut Cursor) -> PResult<FieldDescriptor> {
    let start = c.pos;
    let w = c.word("field")?;
    match w {
        "rational" | "Q" => Ok(FieldDescriptor::Rational),
        "symbolic" => Ok(FieldDescriptor::SymbolicUncountable),
        _ => {
            let q = w.strip_prefix('F').and_then(|q| q.parse::<u32>().ok());
            match q.map(FieldDescriptor::finite) {
                Some(Ok(f)) => Ok(f),
                _ => {
                    c.pos = start;
                    Err(c.err("field", format!("`rational`, `symbolic` or `F<q>` for a prime power q, not `{w}`")))
                }
            }
        }
    }
}

/// `rational`, `symbolic` or `F<q>`, as accepted by `--field`.
pub fn field_from_flag(s: &str) -> Result<FieldDescriptor, ParseError> {
    let normalized = match s.parse::<u32>() {
        Ok(_) => format!("F{s}"),
        Err(_) => s.to_string(),
    };
    let mut c = Cursor::new(0, &normalized);
    match parse_field(&mut c).and_then(|f| c.end().map(|_| f)) {
        Ok(f) => Ok(f),
        Err(InputError::Parse(e)) => Err(e),
        Err(InputError::Library { error, .. }) => Err(ParseError {
            line: 0,
            column: 1,
            rule: "field",
            message: error.to_string(),
        }),
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn prime_power(n: u64) -> Option<(u64, u32)> {
    let p = (2..=n).find(|d| n % d == 0)?;
    let mut m = n;
    let mut k = 0;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

impl Parser {
    fn ring(&self, c: &Cursor) -> PResult<&RingDescriptor> {
        self.ring
            .as_ref()
            .ok_or_else(|| c.err("ring declaration", "a `ring` line before any other declaration"))
    }

    fn field(&self, c: &Cursor) -> PResult<FieldDescriptor> {
        match self.ring(c)? {
            RingDescriptor::Kronecker(f) => Ok(f.clone()),
            r => Err(c.err("Kronecker ring", format!("points need a Kronecker ring, not {r}"))),
        }
    }

    fn point(&self, c: &mut Cursor) -> PResult<ProjPoint> {
        let field = self.field(c)?;
        let start = c.pos;
        if let FieldDescriptor::SymbolicUncountable = field {
            let w = c.word("point")?;
            return match w.strip_prefix('f').and_then(|k| k.parse().ok()) {
                Some(k) => Ok(ProjPoint::Formal(k)),
                None => {
                    c.pos = start;
                    Err(c.err("point", "a formal point `f<k>` over a symbolic field"))
                }
            };
        }
        c.expect("(", "point")?;
        let (an, ad) = c.rational("point")?;
        c.expect(":", "point")?;
        let (bn, bd) = c.rational("point")?;
        c.expect(")", "point")?;
        let bad = |c: &mut Cursor, why: &str| {
            c.pos = start;
            Err(c.err("point", why.to_string()))
        };
        if an == 0 && bn == 0 {
            return bad(c, "(0:0) is not a point");
        }
        if an == 0 {
            return Ok(ProjPoint::Infinity);
        }
        match &field {
            FieldDescriptor::Rational => {
                // (a:b) = (1 : b/a).
                let t = BigRational::new((bn * ad).into(), (bd * an).into());
                Ok(ProjPoint::Affine(Scalar::Q(t)))
            }
            FieldDescriptor::FiniteField(q) => {
                let q = i64::from(*q);
                if ad != 1 || bd != 1 {
                    return bad(c, "integer coordinates over a finite field");
                }
                if an.rem_euclid(q) == 1 {
                    return if (0..q).contains(&bn) {
                        Ok(ProjPoint::Affine(Scalar::F(bn as u32)))
                    } else {
                        bad(c, "a field element index in 0..q")
                    };
                }
                if !is_prime(q as u64) {
                    return bad(c, "the form (1:t) over a field that is not prime");
                }
                let a = an.rem_euclid(q);
                if a == 0 {
                    return Ok(ProjPoint::Infinity);
                }
                let inv = (1..q).find(|x| (x * a) % q == 1).unwrap_or(1);
                Ok(ProjPoint::Affine(Scalar::F((bn.rem_euclid(q) * inv % q) as u32)))
            }
            FieldDescriptor::SymbolicUncountable => unreachable!(),
        }
    }

    fn module(&self, c: &mut Cursor) -> PResult<Indecomposable> {
        let start = c.pos;
        let ring = self.ring(c)?.clone();
        c.ws();
        let start_col = c.pos;
        let w = c.word("module")?;
        let m = match w {
            "Z" if c.rest().starts_with('/') => {
                c.pos += 1;
                let n = c.nat("module")?;
                match prime_power(n) {
                    Some((p, k)) => Indecomposable::torsion(p, k),
                    None => {
                        c.pos = start_col;
                        return Err(c.err("module", format!("Z/{n}: the order must be a prime power")));
                    }
                }
            }
            "Z" => Indecomposable::ZFree,
            "R" => {
                c.expect("[", "module")?;
                let pt = self.point(c)?;
                c.expect(",", "module")?;
                let k = c.nat("module")? as u32;
                c.expect("]", "module")?;
                Indecomposable::regular(pt, k)
            }
            "M" => {
                c.expect("[", "module")?;
                let i = c.nat("module")? as u32;
                c.expect(",", "module")?;
                let j = c.nat("module")? as u32;
                c.expect("]", "module")?;
                Indecomposable::interval(i, j)
            }
            _ => {
                let (kind, n) = w.split_at(1);
                match (kind, n.parse::<u32>()) {
                    ("P", Ok(n)) => Indecomposable::Preprojective(n),
                    ("I", Ok(n)) => Indecomposable::Preinjective(n),
                    _ => {
                        c.pos = start_col;
                        return Err(c.err("module", format!("Z, Z/<n>, P<n>, I<n>, R[<point>,<k>] or M[<i>,<j>], not `{w}`")));
                    }
                }
            }
        };
        if !ring.admits(&m) {
            c.pos = start;
            c.ws();
            return Err(c.err("module", format!("{m} is not a module over {ring}")));
        }
        Ok(m)
    }

    fn module_list(&self, c: &mut Cursor) -> PResult<Vec<Indecomposable>> {
        if c.eat("0") {
            return Ok(Vec::new());
        }
        let mut out = vec![self.module(c)?];
        while c.eat("+") {
            out.push(self.module(c)?);
        }
        Ok(out)
    }

    fn label(&self, c: &mut Cursor, universe: &Universe) -> PResult<Label> {
        match universe {
            Universe::Primes => {
                let start = c.pos;
                let p = c.nat("prime")?;
                if !is_prime(p) {
                    c.pos = start;
                    c.ws();
                    return Err(c.err("prime", format!("{p} is not prime")));
                }
                Ok(Label::Prime(p))
            }
            Universe::Points(_) => Ok(Label::Point(self.point(c)?)),
        }
    }

    fn label_set(&self, c: &mut Cursor, universe: Universe) -> PResult<LabelSet> {
        if c.eat("all") {
            return Ok(LabelSet::all(universe));
        }
        if c.eat("tail") {
            let n = c.nat("label set")?;
            return Ok(LabelSet::tail(universe, n));
        }
        let negated = c.eat("cofinite");
        c.expect("{", "label set")?;
        let mut labels = Vec::new();
        if !c.eat("}") {
            loop {
                labels.push(self.label(c, &universe)?);
                if c.eat("}") {
                    break;
                }
                c.expect(",", "label set")?;
            }
        }
        let tail = if !negated && c.eat("+") {
            c.expect("tail", "label set")?;
            Some(c.nat("label set")?)
        } else {
            None
        };
        Ok(LabelSet::new(universe, negated, labels, tail))
    }

    fn descriptor(&self, c: &mut Cursor) -> PResult<ThickDescriptor> {
        let ring = self.ring(c)?.clone();
        c.ws();
        let start = c.pos;
        let w = c.word("descriptor")?;
        let d = match w {
            "zero" => ThickDescriptor::Zero,
            "all" => ThickDescriptor::All,
            "torsion" => {
                if ring != RingDescriptor::IntegerRing {
                    c.pos = start;
                    return Err(c.err("descriptor", format!("torsion classes live over Z, not {ring}")));
                }
                ThickDescriptor::torsion(self.label_set(c, Universe::Primes)?)
            }
            "regular" => {
                let f = self.field(c)?;
                ThickDescriptor::regular(self.label_set(c, Universe::Points(f))?)
            }
            "exceptional" | "generated" => {
                let mut gens = vec![self.module(c)?];
                while c.eat(",") {
                    gens.push(self.module(c)?);
                }
                if w == "exceptional" {
                    c.lib(ThickDescriptor::exceptional(&ring, &gens))?
                } else {
                    c.lib(ThickDescriptor::generated(&ring, &gens))?
                }
            }
            name => match lookup(&self.doc_thick, name) {
                Some(d) => d.clone(),
                None => {
                    c.pos = start;
                    return Err(c.err("descriptor", format!("zero, all, torsion, regular, exceptional, generated or a declared name, not `{name}`")));
                }
            },
        };
        if !d.fits(&ring) {
            c.pos = start;
            return Err(c.err("descriptor", format!("{d} does not describe a subcategory over {ring}")));
        }
        Ok(d)
    }

    fn side(&self, c: &mut Cursor) -> PResult<Side> {
        if c.eat("infinite") {
            return Ok(Side::Infinite);
        }
        if c.eat("linear") {
            return Ok(Side::Finite(Growth::linear()));
        }
        c.expect("growth", "window side")?;
        c.expect("start", "window side")?;
        let start = c.nat("window side")?;
        c.expect("step", "window side")?;
        let step = c.nat("window side")?;
        let mut prefix = Vec::new();
        if c.eat("prefix") {
            prefix.push(c.nat("window side")?);
            while c.eat(",") {
                prefix.push(c.nat("window side")?);
            }
        }
        Ok(Side::Finite(c.lib(Growth::new(prefix, start, step))?))
    }

    fn chain(&self, c: &mut Cursor) -> PResult<ChainSchedule> {
        let mut prefix = Vec::new();
        if c.eat("[") {
            loop {
                prefix.push(self.descriptor(c)?);
                if c.eat("]") {
                    break;
                }
                c.expect(";", "chain prefix")?;
            }
            c.expect("then", "chain")?;
        }
        let tail = if c.eat("constant") {
            ChainTail::Constant(self.descriptor(c)?)
        } else {
            let kind = if c.eat("prime_tail") {
                TailKind::Primes
            } else if c.eat("tube_tail") {
                TailKind::Points(self.field(c)?)
            } else {
                return Err(c.err("chain", "`constant <descriptor>`, `prime_tail` or `tube_tail`"));
            };
            let (mut scale, mut shift, mut fixed) = (1, 0, ThickDescriptor::Zero);
            loop {
                if c.eat("scale") {
                    scale = c.nat("chain")?;
                } else if c.eat("shift") {
                    shift = c.int("chain")?;
                } else if c.eat("plus") {
                    fixed = self.descriptor(c)?;
                } else {
                    break;
                }
            }
            ChainTail::Shrinking { fixed, kind, scale, shift }
        };
        c.lib(ChainSchedule::new(prefix, tail))
    }

    fn metric_clause(&self, c: &mut Cursor, nf: &mut NfClauses) -> PResult<()> {
        let start = c.pos;
        let w = c.word("metric clause")?;
        match w {
            "low" => nf.low = self.side(c)?,
            "high" => nf.high = self.side(c)?,
            "below" => nf.below = Some(self.chain(c)?),
            "mid" | "chain" => nf.mid = Some(self.chain(c)?),
            "above" => nf.above = Some(self.chain(c)?),
            _ => {
                c.pos = start;
                c.ws();
                return Err(c.err("metric clause", format!("low, high, below, mid, chain or above, not `{w}`")));
            }
        }
        Ok(())
    }

    fn object_expr(&self, c: &mut Cursor) -> PResult<SplitObject> {
        let ring = self.ring(c)?.clone();
        c.ws();
        let save = c.pos;
        if let Ok(name) = c.word("object") {
            if let Some(x) = lookup(&self.objects, name) {
                return Ok(x.clone());
            }
        }
        c.pos = save;
        if c.eat("0") {
            return Ok(SplitObject::zero(ring));
        }
        let mut parts = Vec::new();
        loop {
            let m = self.module(c)?;
            let d = if c.eat("@") { c.int("object")? } else { 0 };
            parts.push((d, m));
            if !c.eat("+") {
                break;
            }
        }
        c.lib(SplitObject::new(ring, parts))
    }

    fn scalar(&self, c: &mut Cursor) -> PResult<Scalar> {
        let (n, d) = c.rational("matrix entry")?;
        match self.field(c)? {
            FieldDescriptor::FiniteField(q) => {
                if d != 1 {
                    return Err(c.err("matrix entry", "integer entries over a finite field"));
                }
                Ok(Scalar::F(n.rem_euclid(i64::from(q)) as u32))
            }
            _ => Ok(Scalar::ratio(n, d)),
        }
    }

    /// `[a b; c d]`, with an optional explicit shape for empty matrices.
    fn matrix<T: Clone>(&self, c: &mut Cursor, rows: usize, cols: usize, entry: &dyn Fn(&Self, &mut Cursor) -> PResult<T>, zero: T) -> PResult<Mat<T>> {
        c.expect("[", "matrix")?;
        let mut data: Vec<Vec<T>> = vec![Vec::new()];
        loop {
            if c.eat("]") {
                break;
            }
            if c.eat(";") {
                data.push(Vec::new());
                continue;
            }
            let v = entry(self, c)?;
            data.last_mut().unwrap().push(v);
            c.eat(",");
        }
        if data.len() == 1 && data[0].is_empty() {
            if rows == 0 || cols == 0 {
                return Ok(Mat::filled(rows, cols, zero));
            }
            return Err(c.err("matrix", format!("a {rows}x{cols} matrix")));
        }
        if data.len() != rows || data.iter().any(|r| r.len() != cols) {
            return Err(c.err("matrix", format!("a {rows}x{cols} matrix")));
        }
        Ok(Mat::from_rows(rows, cols, data.into_iter().flatten().collect()))
    }

    fn map(&self, c: &mut Cursor) -> PResult<ModuleMap> {
        let ring = self.ring(c)?.clone();
        if c.eat("canonical") {
            let field = self.field(c)?;
            let n = c.nat("map")? as u32;
            if n == 0 {
                return Err(c.err("map", "`canonical <n>` with n >= 1 (the map P(n-1) -> P(n))"));
            }
            c.expect("at", "map")?;
            let pt = self.point(c)?;
            return c.lib(ModuleMap::canonical_preprojective(field, n, &pt));
        }
        let source = self.module_list(c)?;
        c.expect("--", "map arrow")?;
        enum Data {
            Scalar(i64),
            Int(Mat<num_bigint::BigInt>),
            Pair(Mat<Scalar>, Mat<Scalar>),
        }
        c.ws();
        let body_at = c.pos;
        let body = if c.peek("[") {
            None
        } else {
            Some(Data::Scalar(c.int("map arrow")?))
        };
        // Matrices need the target's shape, which follows the arrow; parse
        // the target first and come back.
        let mut ahead = Cursor::new(c.line, c.text);
        ahead.pos = c.pos;
        let skip = ahead.rest().find("-->").ok_or_else(|| c.err("map arrow", "`-->`"))?;
        ahead.pos += skip + 3;
        let target = self.module_list(&mut ahead)?;
        let data = match body {
            Some(d) => d,
            None => match &ring {
                RingDescriptor::IntegerRing => {
                    let e = |_: &Self, c: &mut Cursor| c.int("matrix entry").map(num_bigint::BigInt::from);
                    Data::Int(self.matrix(c, target.len(), source.len(), &e, 0.into())?)
                }
                RingDescriptor::Kronecker(_) => {
                    let (s2, s1) = kron_dims(&source);
                    let (t2, t1) = kron_dims(&target);
                    let e = |p: &Self, c: &mut Cursor| p.scalar(c);
                    let zero = match self.field(c)? {
                        FieldDescriptor::FiniteField(_) => Scalar::F(0),
                        _ => Scalar::int(0),
                    };
                    let f2 = self.matrix(c, t2, s2, &e, zero.clone())?;
                    c.expect(",", "map arrow")?;
                    let f1 = self.matrix(c, t1, s1, &e, zero)?;
                    Data::Pair(f2, f1)
                }
                r => {
                    c.pos = body_at;
                    return Err(c.err("map", format!("explicit maps over Z or the Kronecker quiver, not {r}")));
                }
            },
        };
        c.expect("-->", "map arrow")?;
        c.pos = ahead.pos;
        match data {
            Data::Scalar(m) => match &ring {
                RingDescriptor::IntegerRing => {
                    let n = source.len();
                    if target != source {
                        c.lib(ModuleMap::integer(
                            source,
                            target.clone(),
                            Mat::from_fn(target.len(), n, |r, col| if r == col { m.into() } else { 0.into() }),
                        ))
                    } else {
                        c.lib(ModuleMap::multiplication(source, m))
                    }
                }
                _ => Err(c.err("map", "a scalar map only over Z; use `--[..], [..]-->` matrices")),
            },
            Data::Int(mat) => c.lib(ModuleMap::integer(source, target, mat)),
            Data::Pair(f2, f1) => {
                let field = self.field(c)?;
                c.lib(ModuleMap::kronecker(field, source, target, f2, f1))
            }
        }
    }

    fn sequence(&self, c: &mut Cursor) -> PResult<SequenceDecl> {
        let ring = self.ring(c)?.clone();
        let start = c.pos;
        let w = c.word("sequence")?;
        match w {
            "small_object" => {
                let d = self.descriptor(c)?;
                c.expect("from", "sequence")?;
                let x = self.object_expr(c)?;
                c.expect("steps", "sequence")?;
                let n = c.nat("sequence")? as usize;
                Ok(SequenceDecl {
                    sequence: c.lib(small_object_sequence(&ring, &d, &x, n))?,
                    built_for: Some(d),
                })
            }
            "multiply" => {
                let mut fs = vec![c.int("sequence")?];
                while !c.at_end() {
                    fs.push(c.int("sequence")?);
                }
                Ok(SequenceDecl {
                    sequence: c.lib(ObjectSequence::multiplication_chain(&fs))?,
                    built_for: None,
                })
            }
            "preprojective" => {
                let field = self.field(c)?;
                let n = c.nat("sequence")? as u32;
                c.expect("at", "sequence")?;
                let mut pts = vec![self.point(c)?];
                while !c.at_end() {
                    c.eat(",");
                    pts.push(self.point(c)?);
                }
                Ok(SequenceDecl {
                    sequence: c.lib(ObjectSequence::preprojective_chain(field, n, &pts))?,
                    built_for: None,
                })
            }
            "constant" => {
                let x = self.object_expr(c)?;
                c.expect("steps", "sequence")?;
                let n = c.nat("sequence")? as usize;
                Ok(SequenceDecl {
                    sequence: ObjectSequence::constant(x, n),
                    built_for: None,
                })
            }
            _ => {
                c.pos = start;
                c.ws();
                Err(c.err("sequence", format!("small_object, multiply, preprojective or constant, not `{w}`")))
            }
        }
    }
}

fn kron_dims(ms: &[Indecomposable]) -> (usize, usize) {
    ms.iter().fold((0, 0), |(a, b), m| {
        let (d2, d1) = match m {
            Indecomposable::Preprojective(n) => (*n as usize, *n as usize + 1),
            Indecomposable::Preinjective(n) => (*n as usize + 1, *n as usize),
            Indecomposable::Regular { length, .. } => (*length as usize, *length as usize),
            _ => (0, 0),
        };
        (a + d2, b + d1)
    })
}

struct NfClauses {
    low: Side,
    high: Side,
    below: Option<ChainSchedule>,
    mid: Option<ChainSchedule>,
    above: Option<ChainSchedule>,
}

impl Default for NfClauses {
    fn default() -> Self {
        NfClauses {
            low: Side::Infinite,
            high: Side::Infinite,
            below: None,
            mid: None,
            above: None,
        }
    }
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

/// Parse a whole input file. `default_field` is used for `ring kronecker`
/// lines that name no field.
pub fn parse(text: &str, default_field: &FieldDescriptor) -> PResult<Document> {
    let mut p = Parser {
        ring: None,
        default_field: default_field.clone(),
        doc_thick: Vec::new(),
        metrics: Vec::new(),
        objects: Vec::new(),
        maps: Vec::new(),
        sequences: Vec::new(),
    };
    let lines: Vec<&str> = text.lines().collect();
    let mut i = 0;
    while i < lines.len() {
        let line_no = i + 1;
        let raw = strip_comment(lines[i]);
        i += 1;
        let mut c = Cursor::new(line_no, raw);
        if c.at_end() {
            continue;
        }
        let kw_at = c.pos;
        let kw = c.word("declaration")?;
        let declare = |c: &mut Cursor, taken: &dyn Fn(&str) -> bool| -> PResult<String> {
            c.ws();
            let at = c.pos;
            let name = c.word("name")?.to_string();
            if taken(&name) {
                c.pos = at;
                return Err(c.err("fresh name", format!("`{name}` is already declared")));
            }
            c.expect("=", "declaration")?;
            Ok(name)
        };
        match kw {
            "ring" => {
                if p.ring.is_some() {
                    c.pos = kw_at;
                    return Err(c.err("single ring declaration", "only one `ring` line"));
                }
                let w_at = {
                    c.ws();
                    c.pos
                };
                let w = c.word("ring")?;
                let ring = match w {
                    "Z" => RingDescriptor::IntegerRing,
                    "kronecker" => {
                        let f = if c.at_end() { p.default_field.clone() } else { parse_field(&mut c)? };
                        RingDescriptor::Kronecker(f)
                    }
                    "dynkin" => {
                        let n = c.nat("ring")? as u32;
                        c.lib(RingDescriptor::dynkin(n))?
                    }
                    _ => match w.strip_prefix('A').and_then(|n| n.parse::<u32>().ok()) {
                        Some(n) => c.lib(RingDescriptor::dynkin(n))?,
                        None => {
                            c.pos = w_at;
                            return Err(c.err("ring", format!("Z, kronecker [field] or A<n>, not `{w}`")));
                        }
                    },
                };
                c.end()?;
                p.ring = Some(ring);
            }
            "thick" => {
                let name = declare(&mut c, &|n| lookup(&p.doc_thick, n).is_some())?;
                let d = p.descriptor(&mut c)?;
                c.end()?;
                p.doc_thick.push((name, d));
            }
            "metric" => {
                let name = declare(&mut c, &|n| lookup(&p.metrics, n).is_some())?;
                let ring = p.ring(&c)?.clone();
                let w_at = {
                    c.ws();
                    c.pos
                };
                let w = c.word("metric")?;
                let m = match w {
                    "constant" => {
                        let d = p.descriptor(&mut c)?;
                        c.lib(MetricNF::constant(ring, d))?
                    }
                    "aisle" => c.lib(MetricNF::aisle(ring))?,
                    "coaisle" => c.lib(MetricNF::coaisle(ring))?,
                    "t_structure" => c.lib(MetricNF::t_structure(ring))?,
                    "chain" => {
                        let ch = p.chain(&mut c)?;
                        c.lib(MetricNF::pure_chain(ring, ch))?
                    }
                    "nf" => {
                        let mut nf = NfClauses::default();
                        let block = c.at_end();
                        if block {
                            loop {
                                if i >= lines.len() {
                                    return Err(c.err("nf block", "`end` closing the block"));
                                }
                                let mut b = Cursor::new(i + 1, strip_comment(lines[i]));
                                i += 1;
                                if b.at_end() {
                                    continue;
                                }
                                if b.eat("end") {
                                    b.end()?;
                                    break;
                                }
                                p.metric_clause(&mut b, &mut nf)?;
                                b.end()?;
                                c = b;
                            }
                        } else {
                            loop {
                                p.metric_clause(&mut c, &mut nf)?;
                                if !c.eat(";") {
                                    break;
                                }
                            }
                        }
                        let all = ChainSchedule::constant(ThickDescriptor::All);
                        let mid = nf.mid.unwrap_or_else(|| ChainSchedule::constant(ThickDescriptor::Zero));
                        c.lib(MetricNF::new(
                            ring,
                            nf.low,
                            nf.high,
                            nf.below.unwrap_or_else(|| all.clone()),
                            mid,
                            nf.above.unwrap_or(all),
                        ))?
                    }
                    _ => {
                        c.pos = w_at;
                        return Err(c.err("metric", format!("constant, aisle, coaisle, t_structure, chain or nf, not `{w}`")));
                    }
                };
                c.end()?;
                p.metrics.push((name, m));
            }
            "object" => {
                let name = declare(&mut c, &|n| lookup(&p.objects, n).is_some())?;
                let x = p.object_expr(&mut c)?;
                c.end()?;
                p.objects.push((name, x));
            }
            "map" => {
                let name = declare(&mut c, &|n| lookup(&p.maps, n).is_some())?;
                let m = p.map(&mut c)?;
                c.end()?;
                p.maps.push((name, m));
            }
            "sequence" => {
                let name = declare(&mut c, &|n| lookup(&p.sequences, n).is_some())?;
                let s = p.sequence(&mut c)?;
                c.end()?;
                p.sequences.push((name, s));
            }
            _ => {
                c.pos = kw_at;
                return Err(c.err("declaration", format!("ring, thick, metric, object, map or sequence, not `{kw}`")));
            }
        }
    }
    let ring = p.ring.ok_or_else(|| {
        InputError::Parse(ParseError {
            line: lines.len().max(1),
            column: 1,
            rule: "ring declaration",
            message: "the file declares no ring".into(),
        })
    })?;
    Ok(Document {
        ring,
        metrics: p.metrics,
        objects: p.objects,
        maps: p.maps,
        sequences: p.sequences,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_q(text: &str) -> PResult<Document> {
        parse(text, &FieldDescriptor::Rational)
    }

    #[test]
    fn integer_document() {
        let doc = parse_q(
            "ring Z\n\
             thick C = torsion {2, 3}\n\
             metric M = constant C   # comment\n\
             metric N = nf chain prime_tail\n\
             metric W = nf\n  low linear\n  high growth start 2 step 2\n  mid constant torsion {5}\nend\n\
             object X = Z/2 + Z@1\n\
             map f = Z --2--> Z\n\
             map g = Z + Z/4 --[1 0; 0 1]--> Z + Z/4\n\
             sequence S = small_object C from Z steps 4\n",
        )
        .unwrap();
        assert_eq!(doc.metrics.len(), 3);
        assert_eq!(doc.object("X").unwrap().to_string(), "Z/2@0 + Z@1");
        assert_eq!(doc.sequence("S").unwrap().sequence.steps(), 4);
    }

    #[test]
    fn kronecker_document() {
        let doc = parse_q(
            "ring kronecker rational\n\
             metric M = constant regular {(1:0)}\n\
             map f = canonical 2 at (1:0)\n\
             map g = P0 --[], [1; 0]--> P1\n\
             sequence S = preprojective 0 at (1:0) (1:0) (0:1)\n",
        )
        .unwrap();
        assert_eq!(doc.maps.len(), 2);
        assert_eq!(doc.sequence("S").unwrap().sequence.steps(), 3);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_q("ring Z\nthick C = torsion {2, 4}\n").unwrap_err();
        match e {
            InputError::Parse(p) => {
                assert_eq!((p.line, p.column, p.rule), (2, 23, "prime"));
            }
            e => panic!("{e}"),
        }
        let e = parse_q("ring Z\nmetric M = wobble\n").unwrap_err();
        assert!(matches!(e, InputError::Parse(ParseError { line: 2, column: 12, rule: "metric", .. })));
        assert!(matches!(parse_q("thick C = zero\n"), Err(InputError::Parse(ParseError { rule: "ring declaration", .. }))));
        assert!(matches!(parse_q("ring Q\n"), Err(InputError::Parse(ParseError { rule: "ring", .. }))));
        let e = parse_q("ring Z\nmetric M = nf\n low linear\n").unwrap_err();
        assert!(matches!(e, InputError::Parse(ParseError { rule: "nf block", .. })));
    }

    #[test]
    fn library_errors_are_separate() {
        let e = parse_q("ring Z\nmap f = Z/2 --[1]--> Z\n").unwrap_err();
        assert!(matches!(e, InputError::Library { line: 2, .. }));
    }
}
