//! Order-preserving parallel processing of line-aligned files.

use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

/// Lines handed to the worker pool at a time.
const CHUNK: usize = 4096;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Data(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Data(m) => f.write_str(m),
        }
    }
}

impl From<edittag::Error> for Failure {
    fn from(e: edittag::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

pub type CliResult<T = ()> = Result<T, Failure>;

pub fn data_err(path: &Path, e: impl fmt::Display) -> Failure {
    Failure::Data(format!("{}: {e}", path.display()))
}

pub fn open(path: &Path) -> CliResult<Box<dyn BufRead>> {
    if path.as_os_str() == "-" {
        return Ok(Box::new(BufReader::new(io::stdin())));
    }
    let f = File::open(path).map_err(|e| data_err(path, e))?;
    Ok(Box::new(BufReader::new(f)))
}

pub struct Output {
    path: PathBuf,
    inner: Box<dyn Write>,
}

impl Output {
    pub fn create(path: &Path) -> CliResult<Output> {
        let inner: Box<dyn Write> = if path.as_os_str() == "-" {
            Box::new(BufWriter::new(io::stdout()))
        } else {
            Box::new(BufWriter::new(File::create(path).map_err(|e| data_err(path, e))?))
        };
        Ok(Output {
            path: path.to_path_buf(),
            inner,
        })
    }

    /// Standard output unless a path is given.
    pub fn or_stdout(path: Option<&Path>) -> CliResult<Output> {
        Output::create(path.unwrap_or(Path::new("-")))
    }

    pub fn write_str(&mut self, s: &str) -> CliResult {
        self.inner.write_all(s.as_bytes()).map_err(|e| data_err(&self.path, e))
    }

    pub fn finish(mut self) -> CliResult {
        self.inner.flush().map_err(|e| data_err(&self.path, e))
    }

    pub fn writer(&mut self) -> &mut dyn Write {
        &mut self.inner
    }
}

/// Reads the inputs in lockstep and maps each group of lines with `f` on
/// the worker pool, feeding results to `sink` in input order. A failing
/// line is reported as `file:line: message` against the first input.
pub fn process<T, F, S>(inputs: &[&Path], f: F, mut sink: S) -> CliResult
where
    T: Send,
    F: Fn(&[String]) -> Result<T, String> + Sync,
    S: FnMut(T) -> CliResult,
{
    let mut readers = inputs.iter().map(|p| open(p).map(|r| r.lines())).collect::<CliResult<Vec<_>>>()?;
    let mut line_no = 0usize;
    loop {
        let mut chunk: Vec<Vec<String>> = Vec::with_capacity(CHUNK);
        'fill: while chunk.len() < CHUNK {
            let mut group = Vec::with_capacity(readers.len());
            for (k, r) in readers.iter_mut().enumerate() {
                match r.next().transpose() {
                    Ok(line) => group.push(line),
                    Err(e) => return Err(data_err(inputs[k], e)),
                }
            }
            let present = group.iter().filter(|l| l.is_some()).count();
            if present == 0 {
                break 'fill;
            }
            if present < group.len() {
                let k = group.iter().position(Option::is_none).unwrap_or(0);
                return Err(Failure::Data(format!(
                    "{}:{}: inputs have different line counts",
                    inputs[k].display(),
                    line_no + chunk.len() + 1
                )));
            }
            chunk.push(group.into_iter().flatten().collect());
        }
        if chunk.is_empty() {
            return Ok(());
        }
        let last = chunk.len() < CHUNK;
        let results: Vec<Result<T, String>> = chunk.par_iter().map(|g| f(g)).collect();
        for (i, r) in results.into_iter().enumerate() {
            let v = r.map_err(|m| Failure::Data(format!("{}:{}: {m}", inputs[0].display(), line_no + i + 1)))?;
            sink(v)?;
        }
        line_no += chunk.len();
        if last {
            return Ok(());
        }
    }
}
