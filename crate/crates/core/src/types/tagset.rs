use std::collections::HashMap;
use std::path::Path;
use std::sync::OnceLock;

use super::tags::{EditTag, TagFamily};
use crate::error::{Error, Result};

const DEFAULT_TAGSET: &str = include_str!("../../data/tagset.txt");

/// The edit space: an ordered tag list with dense ids in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagSet {
    tags: Vec<EditTag>,
    index: HashMap<EditTag, usize>,
}

impl TagSet {
    /// Builds a tagset from tags in id order. Duplicates are rejected and
    /// `$KEEP`, `$DELETE` and `$UNKNOWN` must be present.
    pub fn from_tags(tags: impl IntoIterator<Item = EditTag>) -> Result<Self> {
        let mut set = TagSet {
            tags: Vec::new(),
            index: HashMap::new(),
        };
        for (i, tag) in tags.into_iter().enumerate() {
            set.push(tag, i + 1)?;
        }
        set.check_required()?;
        Ok(set)
    }

    /// Parses the one-tag-per-line file format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut set = TagSet {
            tags: Vec::new(),
            index: HashMap::new(),
        };
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let tag = line
                .parse::<EditTag>()
                .map_err(|e| Error::MalformedTag {
                    line: line_no,
                    tag: line.to_string(),
                    reason: e.reason,
                })?;
            set.push(tag, line_no)?;
        }
        set.check_required()?;
        Ok(set)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// The bundled default edit space.
    pub fn default_tagset() -> &'static TagSet {
        static DEFAULT: OnceLock<TagSet> = OnceLock::new();
        DEFAULT.get_or_init(|| TagSet::parse(DEFAULT_TAGSET).expect("bundled tagset is valid"))
    }

    fn push(&mut self, tag: EditTag, line: usize) -> Result<()> {
        if self.index.contains_key(&tag) {
            return Err(Error::DuplicateTag {
                line,
                tag: tag.to_string(),
            });
        }
        self.index.insert(tag.clone(), self.tags.len());
        self.tags.push(tag);
        Ok(())
    }

    fn check_required(&self) -> Result<()> {
        for (tag, name) in [
            (EditTag::Keep, "$KEEP"),
            (EditTag::Delete, "$DELETE"),
            (EditTag::Unknown, "$UNKNOWN"),
        ] {
            if !self.index.contains_key(&tag) {
                return Err(Error::MissingTag(name));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn id(&self, tag: &EditTag) -> Option<usize> {
        self.index.get(tag).copied()
    }

    pub fn tag(&self, id: usize) -> Option<&EditTag> {
        self.tags.get(id)
    }

    pub fn contains(&self, tag: &EditTag) -> bool {
        self.index.contains_key(tag)
    }

    pub fn tags(&self) -> &[EditTag] {
        &self.tags
    }

    pub fn keep_id(&self) -> usize {
        self.index[&EditTag::Keep]
    }

    pub fn unknown_id(&self) -> usize {
        self.index[&EditTag::Unknown]
    }

    pub fn family_count(&self, family: TagFamily) -> usize {
        self.tags.iter().filter(|t| t.family() == family).count()
    }

    /// Renders the file format; `parse(render())` reproduces the tagset.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for tag in &self.tags {
            out.push_str(&tag.to_string());
            out.push('\n');
        }
        out
    }
}
