use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};
use trilab::Point2;

/// Two-column `x,y` CSV. A first row that does not parse as numbers is
/// taken as a header.
pub fn read_points(path: &Path) -> Result<Vec<Point2>> {
    let file = std::fs::File::open(path).with_context(|| format!("reading {}", path.display()))?;
    parse_points(file).with_context(|| format!("in {}", path.display()))
}

pub fn parse_points(source: impl Read) -> Result<Vec<Point2>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(source);
    let mut points = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != 2 {
            bail!("line {}: expected 2 columns, found {}", i + 1, record.len());
        }
        let x = record[0].parse::<f64>();
        let y = record[1].parse::<f64>();
        match (x, y) {
            (Ok(x), Ok(y)) => points.push(Point2::new(x, y)),
            _ if i == 0 => continue,
            _ => bail!("line {}: `{}` is not a pair of numbers", i + 1, record.as_slice()),
        }
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_is_optional() {
        let with = parse_points("x,y\n1,2\n3, 4\n".as_bytes()).unwrap();
        let without = parse_points("1,2\n3,4\n".as_bytes()).unwrap();
        assert_eq!(with, without);
        assert_eq!(with[1], Point2::new(3.0, 4.0));
    }

    #[test]
    fn bad_rows_are_rejected() {
        assert!(parse_points("1,2\nfoo,3\n".as_bytes()).is_err());
        assert!(parse_points("1,2,3\n".as_bytes()).is_err());
    }
}
