use crate::error::{Error, Result};
use crate::model::{BoundingBox, Mask};

/// One connected object instance of one class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryBlob {
    pub mask: Mask,
    pub class_id: u16,
    pub instance_id: u32,
    pub area: usize,
    pub bbox: BoundingBox,
}

impl BinaryBlob {
    /// Wraps a non-empty mask, caching area and bounding box. Connectivity is
    /// the caller's responsibility.
    pub fn from_mask(mask: Mask, class_id: u16, instance_id: u32) -> Result<Self> {
        let bbox = mask.bbox().ok_or(Error::Empty("blob mask has no pixels"))?;
        let area = mask.count();
        Ok(Self { mask, class_id, instance_id, area, bbox })
    }
}
