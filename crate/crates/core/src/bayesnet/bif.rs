//! Reader and writer for the BIF dialect used by discrete BNLearn
//! networks: `network`, `variable`, and `probability` blocks with `table`
//! and per-parent-configuration rows. Unknown `property` entries are
//! skipped.

use super::{BayesNet, BifError, Variable};
use crate::num::Real;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Punct(char),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

const PUNCT: &str = "{}()[]|,;";

fn lex(text: &str) -> Result<Vec<Spanned>, BifError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            chars.next();
            col += 1;
        } else if c == '/' {
            // Line comment; anything else starting with '/' is malformed.
            let (l, co) = (line, col);
            chars.next();
            col += 1;
            if chars.peek() == Some(&'/') {
                for c in chars.by_ref() {
                    if c == '\n' {
                        break;
                    }
                }
                line += 1;
                col = 1;
            } else {
                return Err(BifError::Syntax { line: l, col: co, message: "unexpected '/'".into() });
            }
        } else if PUNCT.contains(c) {
            out.push(Spanned { tok: Tok::Punct(c), line, col });
            chars.next();
            col += 1;
        } else {
            let (l, co) = (line, col);
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() || PUNCT.contains(c) {
                    break;
                }
                word.push(c);
                chars.next();
                col += 1;
            }
            out.push(Spanned { tok: Tok::Word(word), line, col: co });
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    last_line: usize,
}

impl Parser {
    fn new(tokens: Vec<Spanned>, last_line: usize) -> Self {
        Self { tokens, pos: 0, last_line }
    }

    fn peek(&self) -> Option<&Spanned> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn syntax_here<T>(&self, message: impl Into<String>) -> Result<T, BifError> {
        let (line, col) = self
            .peek()
            .map(|t| (t.line, t.col))
            .unwrap_or((self.last_line, 1));
        Err(BifError::Syntax { line, col, message: message.into() })
    }

    fn expect_word(&mut self, context: &str) -> Result<(String, usize), BifError> {
        match self.next() {
            Some(Spanned { tok: Tok::Word(w), line, .. }) => Ok((w, line)),
            Some(Spanned { tok: Tok::Punct(c), line, col }) => {
                Err(BifError::Syntax { line, col, message: format!("expected {context}, found '{c}'") })
            }
            None => Err(BifError::Syntax {
                line: self.last_line,
                col: 1,
                message: format!("unexpected end of file, expected {context}"),
            }),
        }
    }

    fn expect_punct(&mut self, want: char) -> Result<(), BifError> {
        match self.next() {
            Some(Spanned { tok: Tok::Punct(c), .. }) if c == want => Ok(()),
            Some(Spanned { tok, line, col }) => {
                let got = match tok {
                    Tok::Word(w) => w,
                    Tok::Punct(c) => c.to_string(),
                };
                Err(BifError::Syntax { line, col, message: format!("expected '{want}', found '{got}'") })
            }
            None => Err(BifError::Syntax {
                line: self.last_line,
                col: 1,
                message: format!("unexpected end of file, expected '{want}'"),
            }),
        }
    }

    fn eat_punct(&mut self, want: char) -> bool {
        if matches!(self.peek(), Some(Spanned { tok: Tok::Punct(c), .. }) if *c == want) {
            self.pos += 1;
            return true;
        }
        false
    }

    fn word_is(&self, want: &str) -> bool {
        matches!(self.peek(), Some(Spanned { tok: Tok::Word(w), .. }) if w == want)
    }

    /// Skips a `property ... ;` entry.
    fn skip_property(&mut self) -> Result<(), BifError> {
        while let Some(t) = self.next() {
            if t.tok == Tok::Punct(';') {
                return Ok(());
            }
        }
        self.syntax_here("unterminated property (missing ';')")
    }

    fn parse_number(&mut self) -> Result<f64, BifError> {
        let (word, line) = self.expect_word("a probability value")?;
        word.parse::<f64>().map_err(|_| BifError::Syntax {
            line,
            col: 1,
            message: format!("'{word}' is not a number"),
        })
    }

    /// Comma- or whitespace-separated numbers terminated by ';'.
    fn parse_number_list(&mut self) -> Result<Vec<f64>, BifError> {
        let mut values = Vec::new();
        loop {
            values.push(self.parse_number()?);
            if self.eat_punct(',') {
                continue;
            }
            if self.eat_punct(';') {
                return Ok(values);
            }
            if matches!(self.peek(), Some(Spanned { tok: Tok::Word(_), .. })) {
                continue;
            }
            return self.syntax_here("expected ',', ';', or another value");
        }
    }
}

struct ProbabilityBlock {
    child: String,
    child_line: usize,
    parents: Vec<String>,
    /// `table` form: one unconditional row.
    table: Option<Vec<f64>>,
    /// Conditional form: (parent labels, values) per row.
    rows: Vec<(Vec<String>, Vec<f64>)>,
}

pub(super) fn parse<F: Real>(text: &str) -> Result<BayesNet<F>, BifError> {
    let last_line = text.lines().count().max(1);
    let mut p = Parser::new(lex(text)?, last_line);

    let mut variables: Vec<Variable> = Vec::new();
    let mut blocks: Vec<ProbabilityBlock> = Vec::new();

    while let Some(t) = p.peek() {
        let keyword = match &t.tok {
            Tok::Word(w) => w.clone(),
            Tok::Punct(c) => {
                let c = *c;
                return p.syntax_here(format!("expected a block keyword, found '{c}'"));
            }
        };
        match keyword.as_str() {
            "network" => {
                p.next();
                // Optional name words until '{'.
                while !p.eat_punct('{') {
                    if p.next().is_none() {
                        return p.syntax_here("unterminated network block");
                    }
                }
                let mut depth = 1;
                loop {
                    match p.next() {
                        Some(Spanned { tok: Tok::Punct('{'), .. }) => depth += 1,
                        Some(Spanned { tok: Tok::Punct('}'), .. }) => {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                        Some(_) => {}
                        None => return p.syntax_here("unterminated network block"),
                    }
                }
            }
            "variable" => {
                p.next();
                let (name, _) = p.expect_word("a variable name")?;
                p.expect_punct('{')?;
                let mut states: Option<Vec<String>> = None;
                loop {
                    if p.eat_punct('}') {
                        break;
                    }
                    if p.word_is("property") {
                        p.next();
                        p.skip_property()?;
                        continue;
                    }
                    if p.word_is("type") {
                        p.next();
                        let (kind, line) = p.expect_word("'discrete'")?;
                        if kind != "discrete" {
                            return Err(BifError::Syntax {
                                line,
                                col: 1,
                                message: format!("only discrete variables are supported, found '{kind}'"),
                            });
                        }
                        p.expect_punct('[')?;
                        let (count_word, count_line) = p.expect_word("a state count")?;
                        let declared: usize = count_word.parse().map_err(|_| BifError::Syntax {
                            line: count_line,
                            col: 1,
                            message: format!("'{count_word}' is not a state count"),
                        })?;
                        p.expect_punct(']')?;
                        p.expect_punct('{')?;
                        let mut labels = Vec::new();
                        loop {
                            let (label, _) = p.expect_word("a state label")?;
                            labels.push(label);
                            if p.eat_punct(',') {
                                continue;
                            }
                            p.expect_punct('}')?;
                            break;
                        }
                        p.expect_punct(';')?;
                        if labels.len() != declared {
                            return Err(BifError::Semantic(format!(
                                "variable {name}: declared {declared} states but listed {}",
                                labels.len()
                            )));
                        }
                        states = Some(labels);
                        continue;
                    }
                    return p.syntax_here("expected 'type', 'property', or '}'");
                }
                let states = states.ok_or_else(|| {
                    BifError::Semantic(format!("variable {name} has no type declaration"))
                })?;
                if variables.iter().any(|v| v.name == name) {
                    return Err(BifError::Semantic(format!("variable {name} declared twice")));
                }
                variables.push(Variable { name, states });
            }
            "probability" => {
                p.next();
                p.expect_punct('(')?;
                let (child, child_line) = p.expect_word("a variable name")?;
                let mut parents = Vec::new();
                if p.eat_punct('|') {
                    loop {
                        let (parent, _) = p.expect_word("a parent name")?;
                        parents.push(parent);
                        if !p.eat_punct(',') {
                            break;
                        }
                    }
                }
                p.expect_punct(')')?;
                p.expect_punct('{')?;
                let mut block = ProbabilityBlock { child, child_line, parents, table: None, rows: Vec::new() };
                loop {
                    if p.eat_punct('}') {
                        break;
                    }
                    if p.word_is("property") {
                        p.next();
                        p.skip_property()?;
                        continue;
                    }
                    if p.word_is("table") {
                        p.next();
                        block.table = Some(p.parse_number_list()?);
                        continue;
                    }
                    if p.eat_punct('(') {
                        let mut labels = Vec::new();
                        loop {
                            let (label, _) = p.expect_word("a parent state label")?;
                            labels.push(label);
                            if !p.eat_punct(',') {
                                break;
                            }
                        }
                        p.expect_punct(')')?;
                        let values = p.parse_number_list()?;
                        block.rows.push((labels, values));
                        continue;
                    }
                    return p.syntax_here("expected 'table', a '(labels)' row, or '}'");
                }
                blocks.push(block);
            }
            other => {
                return p.syntax_here(format!("unknown block keyword '{other}'"));
            }
        }
    }

    assemble(variables, blocks)
}

fn assemble<F: Real>(variables: Vec<Variable>, blocks: Vec<ProbabilityBlock>) -> Result<BayesNet<F>, BifError> {
    let index_of = |name: &str| variables.iter().position(|v| v.name == name);
    let n = variables.len();
    let mut parents: Vec<Option<Vec<usize>>> = vec![None; n];
    let mut cpts: Vec<Option<Vec<Vec<f64>>>> = vec![None; n];

    for block in blocks {
        let child = index_of(&block.child).ok_or_else(|| BifError::Semantic(format!(
            "probability block at line {} references undeclared variable {}",
            block.child_line, block.child
        )))?;
        let parent_idx: Vec<usize> = block
            .parents
            .iter()
            .map(|p| {
                index_of(p).ok_or_else(|| BifError::Semantic(format!(
                    "variable {} has undeclared parent {p}",
                    block.child
                )))
            })
            .collect::<Result<_, _>>()?;
        if cpts[child].is_some() {
            return Err(BifError::Semantic(format!("duplicate probability block for {}", block.child)));
        }
        let arity = variables[child].states.len();
        let row_count: usize = parent_idx.iter().map(|&p| variables[p].states.len()).product();
        let mut rows: Vec<Option<Vec<f64>>> = vec![None; row_count];

        if parent_idx.is_empty() {
            let table = block.table.ok_or_else(|| BifError::Semantic(format!(
                "root variable {} must use the 'table' form",
                block.child
            )))?;
            rows[0] = Some(table);
        } else {
            if block.table.is_some() {
                return Err(BifError::Semantic(format!(
                    "variable {} has parents and cannot use the 'table' form",
                    block.child
                )));
            }
            for (labels, values) in block.rows {
                if labels.len() != parent_idx.len() {
                    return Err(BifError::Semantic(format!(
                        "variable {}: row lists {} parent states, expected {}",
                        block.child,
                        labels.len(),
                        parent_idx.len()
                    )));
                }
                let mut config = Vec::with_capacity(labels.len());
                for (label, &p) in labels.iter().zip(&parent_idx) {
                    let state = variables[p].states.iter().position(|s| s == label).ok_or_else(|| {
                        BifError::Semantic(format!(
                            "variable {}: '{label}' is not a state of parent {}",
                            block.child, variables[p].name
                        ))
                    })?;
                    config.push(state);
                }
                let row_index = config_to_row(&config, &parent_idx, &variables);
                if rows[row_index].is_some() {
                    return Err(BifError::Semantic(format!(
                        "variable {}: duplicate row for parent states {labels:?}",
                        block.child
                    )));
                }
                rows[row_index] = Some(values);
            }
        }

        let mut table = Vec::with_capacity(row_count);
        for (i, row) in rows.into_iter().enumerate() {
            let row = row.ok_or_else(|| BifError::Semantic(format!(
                "variable {}: expected {row_count} rows, configuration {i} is missing",
                block.child
            )))?;
            if row.len() != arity {
                return Err(BifError::Semantic(format!(
                    "variable {}: row has {} values, expected {arity}",
                    block.child,
                    row.len()
                )));
            }
            table.push(row);
        }
        parents[child] = Some(parent_idx);
        cpts[child] = Some(table);
    }

    for (i, cpt) in cpts.iter().enumerate() {
        if cpt.is_none() {
            return Err(BifError::Semantic(format!(
                "variable {} has no probability block",
                variables[i].name
            )));
        }
    }

    let parents: Vec<Vec<usize>> = parents.into_iter().map(Option::unwrap).collect();
    let cpts: Vec<Vec<Vec<f64>>> = cpts.into_iter().map(Option::unwrap).collect();
    BayesNet::from_f64_parts(variables, parents, cpts, 1e-6)
}

/// Mixed-radix row index; the first parent varies slowest.
pub(super) fn config_to_row(config: &[usize], parent_idx: &[usize], variables: &[Variable]) -> usize {
    let mut index = 0;
    for (state, &p) in config.iter().zip(parent_idx) {
        index = index * variables[p].states.len() + state;
    }
    index
}

/// Inverse of [`config_to_row`].
pub(super) fn row_to_config(mut row: usize, parent_idx: &[usize], variables: &[Variable]) -> Vec<usize> {
    let mut config = vec![0; parent_idx.len()];
    for (slot, &p) in config.iter_mut().zip(parent_idx).rev() {
        let arity = variables[p].states.len();
        *slot = row % arity;
        row /= arity;
    }
    config
}

pub(super) fn write<F: Real>(net: &BayesNet<F>) -> String {
    let mut out = String::from("network unknown {\n}\n");
    for v in net.variables() {
        out.push_str(&format!(
            "variable {} {{\n  type discrete [ {} ] {{ {} }};\n}}\n",
            v.name,
            v.states.len(),
            v.states.join(", ")
        ));
    }
    for (i, v) in net.variables().iter().enumerate() {
        let parents = net.parents(i);
        if parents.is_empty() {
            let row: Vec<String> = net.cpt_row(i, 0).iter().map(|p| p.to_f64_lossy().to_string()).collect();
            out.push_str(&format!("probability ( {} ) {{\n  table {};\n}}\n", v.name, row.join(", ")));
        } else {
            let parent_names: Vec<&str> = parents.iter().map(|&p| net.variables()[p].name.as_str()).collect();
            out.push_str(&format!("probability ( {} | {} ) {{\n", v.name, parent_names.join(", ")));
            for row in 0..net.cpt_row_count(i) {
                let config = row_to_config(row, parents, net.variables());
                let labels: Vec<&str> = config
                    .iter()
                    .zip(parents)
                    .map(|(&s, &p)| net.variables()[p].states[s].as_str())
                    .collect();
                let values: Vec<String> =
                    net.cpt_row(i, row).iter().map(|p| p.to_f64_lossy().to_string()).collect();
                out.push_str(&format!("  ({}) {};\n", labels.join(", "), values.join(", ")));
            }
            out.push_str("}\n");
        }
    }
    out
}
