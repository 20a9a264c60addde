//! Reading and writing matrices by path.

use std::fs;
use std::path::Path;

use ivsk_core::{CooMatrix, CscMatrix, Format, IndexWidth, IvcscMatrix, Value, ValueKind, VcscMatrix};

use crate::container::{deserialize, serialize, ContainerHeader};
use crate::error::{IoError, Result};
use crate::mtx::{write_matrix_market, MatrixMarket};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FileKind {
    MatrixMarket,
    Container,
}

impl FileKind {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "mtx" => Some(FileKind::MatrixMarket),
            "ivsk" => Some(FileKind::Container),
            _ => None,
        }
    }

    /// Kind implied by the path's extension.
    pub fn detect(path: &Path) -> Result<Self> {
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        Self::from_name(&ext.to_ascii_lowercase())
            .ok_or_else(|| IoError::UnsupportedExtension(path.display().to_string()))
    }
}

/// A file loaded into memory, not yet decoded to a typed matrix.
pub enum Loaded {
    MatrixMarket(String),
    Container(Vec<u8>, ContainerHeader),
}

impl Loaded {
    pub fn read(path: &Path, kind: FileKind) -> Result<Self> {
        Ok(match kind {
            FileKind::MatrixMarket => Loaded::MatrixMarket(fs::read_to_string(path)?),
            FileKind::Container => {
                let bytes = fs::read(path)?;
                let header = ContainerHeader::decode(&bytes)?;
                Loaded::Container(bytes, header)
            }
        })
    }

    /// Element type stored in the file; for Matrix Market, the narrowest
    /// type that holds every value.
    pub fn value_kind(&self) -> Result<ValueKind> {
        match self {
            Loaded::MatrixMarket(text) => Ok(MatrixMarket::parse(text)?.natural_kind()),
            Loaded::Container(_, h) => Ok(h.value_kind),
        }
    }

    /// Index width stored in the file, if it has one.
    pub fn index_width(&self) -> Option<IndexWidth> {
        match self {
            Loaded::Container(_, h) => IndexWidth::new(h.idx_size as usize).ok(),
            Loaded::MatrixMarket(_) => None,
        }
    }

    pub fn to_coo<T: Value>(&self) -> Result<CooMatrix<T>> {
        match self {
            Loaded::MatrixMarket(text) => MatrixMarket::parse(text)?.to_coo(),
            Loaded::Container(bytes, h) => Ok(match h.format {
                Format::Csc => deserialize::<CscMatrix<T>>(bytes)?.to_coo(),
                Format::Vcsc => deserialize::<VcscMatrix<T>>(bytes)?.to_coo(),
                Format::Ivcsc => deserialize::<IvcscMatrix<T>>(bytes)?.to_coo(),
            }),
        }
    }
}

/// Encodes `m` as a Matrix Market file or as a container holding `format`.
pub fn encode<T: Value>(m: &CooMatrix<T>, kind: FileKind, format: Format, idx: IndexWidth) -> Result<Vec<u8>> {
    Ok(match kind {
        FileKind::MatrixMarket => {
            let mut buf = Vec::new();
            write_matrix_market(m, &mut buf)?;
            buf
        }
        FileKind::Container => match format {
            Format::Csc => serialize(&CscMatrix::from_coo_with(m, idx)?),
            Format::Vcsc => serialize(&VcscMatrix::from_coo_with(m, idx)?),
            Format::Ivcsc => serialize(&IvcscMatrix::from_coo(m)),
        },
    })
}
