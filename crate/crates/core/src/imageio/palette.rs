//! Palettes: one RGB triple per color index, background first.
//!
//! Text form is one `index R G B` line per entry, starting at index 0.
//! Blank lines and `#` comments are ignored.

use std::collections::HashMap;

use thiserror::Error;

use super::Rgb;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PaletteError {
    #[error("a palette needs a background and at least one color")]
    TooFewEntries,
    #[error("palettes hold at most 256 entries, got {0}")]
    TooManyEntries(usize),
    #[error("colors {first} and {second} are both {color}")]
    DuplicateColor { first: u32, second: u32, color: Rgb },
    #[error("line {line}: expected \"index R G B\"")]
    Syntax { line: usize },
    #[error("line {line}: expected index {expected}, found {found}")]
    IndexOrder {
        line: usize,
        expected: u32,
        found: u32,
    },
    #[error("line {line}: channel value {value:?} is not in 0..=255")]
    Channel { line: usize, value: String },
}

/// Colors for indices `0..=m`; index 0 is the background.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Palette {
    entries: Vec<Rgb>,
    lookup: HashMap<Rgb, u32>,
}

const BASE_COLORS: [Rgb; 8] = [
    Rgb::WHITE,
    Rgb(0, 0, 255),
    Rgb(255, 0, 0),
    Rgb(0, 255, 0),
    Rgb::BLACK,
    Rgb(255, 255, 0),
    Rgb(0, 255, 255),
    Rgb(255, 0, 255),
];

impl Palette {
    pub fn new(entries: Vec<Rgb>) -> Result<Self, PaletteError> {
        if entries.len() < 2 {
            return Err(PaletteError::TooFewEntries);
        }
        if entries.len() > 256 {
            return Err(PaletteError::TooManyEntries(entries.len()));
        }
        let mut lookup = HashMap::with_capacity(entries.len());
        for (i, &color) in entries.iter().enumerate() {
            if let Some(&first) = lookup.get(&color) {
                return Err(PaletteError::DuplicateColor {
                    first,
                    second: i as u32,
                    color,
                });
            }
            lookup.insert(color, i as u32);
        }
        Ok(Palette { entries, lookup })
    }

    /// White background, then blue, red, green, black, yellow, cyan,
    /// magenta, then evenly spread grays and tints for larger `m`.
    ///
    /// # Panics
    /// If `m` is 0 or above 255.
    pub fn default_for(m: u32) -> Self {
        assert!((1..=255).contains(&m), "palette size out of range: {m}");
        let wanted = m as usize + 1;
        let mut entries: Vec<Rgb> = BASE_COLORS.iter().copied().take(wanted).collect();
        let mut step = 0u32;
        while entries.len() < wanted {
            // Walk a coarse RGB cube; skips anything already present.
            let c = Rgb(
                (step * 37 % 256) as u8,
                (step * 101 % 256) as u8,
                (step * 173 % 256) as u8,
            );
            if !entries.contains(&c) {
                entries.push(c);
            }
            step += 1;
        }
        Self::new(entries).expect("generated palette entries are distinct")
    }

    /// White background, black ink.
    pub fn monochrome() -> Self {
        Self::default_for(1).with_entry(1, Rgb::BLACK)
    }

    fn with_entry(mut self, index: usize, color: Rgb) -> Self {
        self.entries[index] = color;
        Self::new(self.entries).expect("monochrome palette is distinct")
    }

    /// Number of painted colors `m`.
    pub fn m(&self) -> u32 {
        (self.entries.len() - 1) as u32
    }

    pub fn entries(&self) -> &[Rgb] {
        &self.entries
    }

    pub fn color(&self, index: u32) -> Option<Rgb> {
        self.entries.get(index as usize).copied()
    }

    pub fn background(&self) -> Rgb {
        self.entries[0]
    }

    pub fn index_of(&self, color: Rgb) -> Option<u32> {
        self.lookup.get(&color).copied()
    }

    pub fn parse(text: &str) -> Result<Self, PaletteError> {
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            let [index, r, g, b] = fields[..] else {
                return Err(PaletteError::Syntax { line });
            };
            let index: u32 = index.parse().map_err(|_| PaletteError::Syntax { line })?;
            let expected = entries.len() as u32;
            if index != expected {
                return Err(PaletteError::IndexOrder {
                    line,
                    expected,
                    found: index,
                });
            }
            let channel = |v: &str| {
                v.parse::<u8>().map_err(|_| PaletteError::Channel {
                    line,
                    value: v.to_string(),
                })
            };
            entries.push(Rgb(channel(r)?, channel(g)?, channel(b)?));
        }
        Self::new(entries)
    }

    pub fn emit(&self) -> String {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{i} {} {} {}\n", c.0, c.1, c.2))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_with_comments() {
        let text = "# background\n0 255 255 255\n\n1 0 0 255 # blue\n2 255 0 0\n3 0 255 0\n";
        let p = Palette::parse(text).unwrap();
        assert_eq!(p.m(), 3);
        assert_eq!(p, Palette::default_for(3));
        assert_eq!(p.index_of(Rgb(255, 0, 0)), Some(2));
        assert_eq!(p.index_of(Rgb(1, 1, 1)), None);
        assert_eq!(Palette::parse(&p.emit()).unwrap(), p);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            Palette::parse("0 1 2 3\n"),
            Err(PaletteError::TooFewEntries)
        );
        assert_eq!(
            Palette::parse("0 1 2 3\n2 4 5 6\n"),
            Err(PaletteError::IndexOrder {
                line: 2,
                expected: 1,
                found: 2
            })
        );
        assert!(matches!(
            Palette::parse("0 1 2\n"),
            Err(PaletteError::Syntax { line: 1 })
        ));
        assert!(matches!(
            Palette::parse("0 1 2 300\n"),
            Err(PaletteError::Channel { .. })
        ));
        assert!(matches!(
            Palette::parse("0 1 2 3\n1 1 2 3\n"),
            Err(PaletteError::DuplicateColor {
                first: 0,
                second: 1,
                ..
            })
        ));
    }

    #[test]
    fn default_palettes_are_distinct() {
        for m in 1..=255 {
            assert_eq!(Palette::default_for(m).m(), m);
        }
        let mono = Palette::monochrome();
        assert_eq!(mono.entries(), &[Rgb::WHITE, Rgb::BLACK]);
    }
}
