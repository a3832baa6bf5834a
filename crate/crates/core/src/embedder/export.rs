use std::io::{self, BufRead, Write};

use super::EmbeddingModel;

/// Writes input vectors in the word2vec text format: a `<count> <dim>`
/// header, then one `token v1 v2 ...` line per vocabulary entry.
pub fn write_word2vec_text<W: Write>(model: &EmbeddingModel, mut out: W) -> io::Result<()> {
    writeln!(out, "{} {}", model.vocab.len(), model.dimension)?;
    for i in 0..model.vocab.len() as u32 {
        write!(out, "{}", model.vocab.token(i))?;
        for v in model.row(i) {
            write!(out, " {v}")?;
        }
        writeln!(out)?;
    }
    out.flush()
}

/// Reads the format written by [`write_word2vec_text`]. Tokens must not
/// contain spaces.
pub fn read_word2vec_text<R: BufRead>(input: R) -> io::Result<Vec<(String, Vec<f32>)>> {
    let bad = |msg: String| io::Error::new(io::ErrorKind::InvalidData, msg);
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| bad("missing header".into()))??;
    let mut fields = header.split_whitespace().map(str::parse::<usize>);
    let (Some(Ok(count)), Some(Ok(dim)), None) = (fields.next(), fields.next(), fields.next()) else {
        return Err(bad(format!("malformed header {header:?}")));
    };
    let mut rows = Vec::with_capacity(count);
    for (n, line) in lines.enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split(' ');
        let token = parts.next().unwrap_or_default().to_owned();
        let values = parts
            .map(str::parse::<f32>)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| bad(format!("line {}: {e}", n + 2)))?;
        if values.len() != dim {
            return Err(bad(format!("line {}: expected {dim} values, found {}", n + 2, values.len())));
        }
        rows.push((token, values));
    }
    if rows.len() != count {
        return Err(bad(format!("header declares {count} rows, found {}", rows.len())));
    }
    Ok(rows)
}
