//! Minimal FITS reader/writer for 2D 64-bit-float images.
//!
//! Supported subset: single HDU, BITPIX=-64, NAXIS=2, no scaling keywords.
//! Header cards are 80 bytes, blocks are 2880 bytes, data is big-endian.
//! One canonical serialization so byte-equality tests hold: numeric values
//! right-justified ending at byte 30, strings quoted from byte 10.

use thiserror::Error;

pub const BLOCK_SIZE: usize = 2880;
pub const CARD_SIZE: usize = 80;

#[derive(Debug, Clone, PartialEq)]
pub enum CardValue {
    Logical(bool),
    Integer(i64),
    Real(f64),
    Str(String),
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeaderCard {
    pub keyword: String,
    pub value: CardValue,
    pub comment: Option<String>,
}

impl HeaderCard {
    pub fn new(keyword: &str, value: CardValue) -> Self {
        Self { keyword: keyword.to_string(), value, comment: None }
    }

    pub fn with_comment(keyword: &str, value: CardValue, comment: &str) -> Self {
        Self { keyword: keyword.to_string(), value, comment: Some(comment.to_string()) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitsImage {
    pub cards: Vec<HeaderCard>,
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<f64>,
}

#[derive(Debug, Error, PartialEq)]
pub enum FitsError {
    #[error("input length {0} is not a multiple of 2880")]
    NotBlockAligned(usize),
    #[error("missing or invalid SIMPLE card")]
    MissingSimple,
    #[error("missing END card")]
    MissingEnd,
    #[error("unsupported BITPIX {0}, only -64 is supported")]
    UnsupportedBitpix(i64),
    #[error("unsupported NAXIS {0}, only 2 is supported")]
    UnsupportedNaxis(i64),
    #[error("missing required card {0}")]
    MissingCard(&'static str),
    #[error("data unit truncated: need {needed} bytes, have {available}")]
    TruncatedData { needed: usize, available: usize },
    #[error("invalid image: {0}")]
    Validation(String),
    #[error("bad header card {index}: {message}")]
    BadCard { index: usize, message: String },
}

impl FitsImage {
    /// Build an image with the mandatory card sequence and END.
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self, FitsError> {
        if width == 0 || height == 0 {
            return Err(FitsError::Validation("dimensions must be positive".into()));
        }
        if pixels.len() != width * height {
            return Err(FitsError::Validation(format!(
                "pixel count {} != {}x{}",
                pixels.len(),
                width,
                height
            )));
        }
        let cards = vec![
            HeaderCard::with_comment("SIMPLE", CardValue::Logical(true), "conforms to FITS standard"),
            HeaderCard::new("BITPIX", CardValue::Integer(-64)),
            HeaderCard::new("NAXIS", CardValue::Integer(2)),
            HeaderCard::new("NAXIS1", CardValue::Integer(width as i64)),
            HeaderCard::new("NAXIS2", CardValue::Integer(height as i64)),
            HeaderCard::new("END", CardValue::None),
        ];
        Ok(Self { cards, width, height, pixels })
    }

    pub fn pixel(&self, x: usize, y: usize) -> f64 {
        self.pixels[y * self.width + x]
    }

    /// Insert a card just before END.
    pub fn push_card(&mut self, card: HeaderCard) {
        let end = self.cards.iter().position(|c| c.keyword == "END").unwrap_or(self.cards.len());
        self.cards.insert(end, card);
    }

    fn validate(&self) -> Result<(), FitsError> {
        if self.width == 0 || self.height == 0 {
            return Err(FitsError::Validation("dimensions must be positive".into()));
        }
        if self.pixels.len() != self.width * self.height {
            return Err(FitsError::Validation("pixel count mismatch".into()));
        }
        let expect = |i: usize, kw: &str, v: CardValue| -> Result<(), FitsError> {
            match self.cards.get(i) {
                Some(c) if c.keyword == kw && c.value == v => Ok(()),
                _ => Err(FitsError::Validation(format!("card {i} must be {kw}"))),
            }
        };
        expect(0, "SIMPLE", CardValue::Logical(true))?;
        expect(1, "BITPIX", CardValue::Integer(-64))?;
        expect(2, "NAXIS", CardValue::Integer(2))?;
        expect(3, "NAXIS1", CardValue::Integer(self.width as i64))?;
        expect(4, "NAXIS2", CardValue::Integer(self.height as i64))?;
        match self.cards.last() {
            Some(c) if c.keyword == "END" => Ok(()),
            _ => Err(FitsError::Validation("cards must end with END".into())),
        }
    }
}

fn fmt_real(v: f64) -> String {
    format!("{v:?}")
}

fn render_card(card: &HeaderCard) -> String {
    let mut s = format!("{:<8}", card.keyword);
    match &card.value {
        CardValue::None => {
            if let Some(c) = &card.comment {
                s.push_str(c);
            }
        }
        value => {
            s.push_str("= ");
            let field = match value {
                CardValue::Logical(b) => format!("{:>20}", if *b { "T" } else { "F" }),
                CardValue::Integer(i) => format!("{i:>20}"),
                CardValue::Real(r) => format!("{:>20}", fmt_real(*r)),
                CardValue::Str(v) => format!("'{:<8}'", v.replace('\'', "''")),
                CardValue::None => unreachable!(),
            };
            s.push_str(&field);
            if let Some(c) = &card.comment {
                s.push_str(" / ");
                s.push_str(c);
            }
        }
    }
    s.truncate(CARD_SIZE);
    format!("{s:<80}")
}

fn parse_card(bytes: &[u8], index: usize) -> Result<HeaderCard, FitsError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|_| FitsError::BadCard { index, message: "non-ASCII card".into() })?;
    let keyword = text[..8].trim_end().to_string();
    let rest = &text[8..];
    if !rest.starts_with("= ") {
        let comment = rest.trim_end();
        return Ok(HeaderCard {
            keyword,
            value: CardValue::None,
            comment: if comment.is_empty() { None } else { Some(comment.to_string()) },
        });
    }
    let body = &rest[2..];
    let (value, tail) = if let Some(q) = body.trim_start().strip_prefix('\'') {
        // quoted string, '' escapes a quote
        let mut out = String::new();
        let mut chars = q.char_indices().peekable();
        let mut end = None;
        while let Some((i, ch)) = chars.next() {
            if ch == '\'' {
                if matches!(chars.peek(), Some((_, '\''))) {
                    out.push('\'');
                    chars.next();
                } else {
                    end = Some(i);
                    break;
                }
            } else {
                out.push(ch);
            }
        }
        let end = end.ok_or_else(|| FitsError::BadCard {
            index,
            message: "unterminated string value".into(),
        })?;
        (CardValue::Str(out.trim_end().to_string()), &q[end + 1..])
    } else {
        let token_end = body.find('/').unwrap_or(body.len());
        let token = body[..token_end].trim();
        let value = match token {
            "T" => CardValue::Logical(true),
            "F" => CardValue::Logical(false),
            t if t.parse::<i64>().is_ok() => CardValue::Integer(t.parse().unwrap()),
            t => CardValue::Real(t.parse::<f64>().map_err(|_| FitsError::BadCard {
                index,
                message: format!("unparsable value '{t}'"),
            })?),
        };
        (value, &body[token_end..])
    };
    let comment = tail
        .trim_start()
        .strip_prefix('/')
        .map(|c| c.trim().to_string())
        .filter(|c| !c.is_empty());
    Ok(HeaderCard { keyword, value, comment })
}

fn pad_to_block(buf: &mut Vec<u8>, fill: u8) {
    while !buf.len().is_multiple_of(BLOCK_SIZE) {
        buf.push(fill);
    }
}

pub fn write_fits(image: &FitsImage) -> Result<Vec<u8>, FitsError> {
    image.validate()?;
    let mut out = Vec::new();
    for card in &image.cards {
        out.extend_from_slice(render_card(card).as_bytes());
    }
    pad_to_block(&mut out, b' ');
    for px in &image.pixels {
        out.extend_from_slice(&px.to_be_bytes());
    }
    pad_to_block(&mut out, 0);
    Ok(out)
}

pub fn read_fits(bytes: &[u8]) -> Result<FitsImage, FitsError> {
    if !bytes.len().is_multiple_of(BLOCK_SIZE) || bytes.is_empty() {
        return Err(FitsError::NotBlockAligned(bytes.len()));
    }
    let mut cards = Vec::new();
    let mut offset = 0;
    let mut saw_end = false;
    while offset + CARD_SIZE <= bytes.len() {
        let card = parse_card(&bytes[offset..offset + CARD_SIZE], cards.len())?;
        offset += CARD_SIZE;
        let is_end = card.keyword == "END";
        // skip pure padding after END was seen
        cards.push(card);
        if is_end {
            saw_end = true;
            break;
        }
    }
    if !saw_end {
        return Err(FitsError::MissingEnd);
    }
    // header occupies whole blocks
    let header_len = offset.div_ceil(BLOCK_SIZE) * BLOCK_SIZE;

    match cards.first() {
        Some(c) if c.keyword == "SIMPLE" && c.value == CardValue::Logical(true) => {}
        _ => return Err(FitsError::MissingSimple),
    }
    let int_card = |kw: &'static str| -> Result<i64, FitsError> {
        cards
            .iter()
            .find(|c| c.keyword == kw)
            .and_then(|c| match c.value {
                CardValue::Integer(i) => Some(i),
                _ => None,
            })
            .ok_or(FitsError::MissingCard(kw))
    };
    let bitpix = int_card("BITPIX")?;
    if bitpix != -64 {
        return Err(FitsError::UnsupportedBitpix(bitpix));
    }
    let naxis = int_card("NAXIS")?;
    if naxis != 2 {
        return Err(FitsError::UnsupportedNaxis(naxis));
    }
    let width = int_card("NAXIS1")? as usize;
    let height = int_card("NAXIS2")? as usize;
    let needed = width * height * 8;
    let available = bytes.len().saturating_sub(header_len);
    if available < needed {
        return Err(FitsError::TruncatedData { needed, available });
    }
    let mut pixels = Vec::with_capacity(width * height);
    for chunk in bytes[header_len..header_len + needed].chunks_exact(8) {
        pixels.push(f64::from_be_bytes(chunk.try_into().unwrap()));
    }
    Ok(FitsImage { cards, width, height, pixels })
}
