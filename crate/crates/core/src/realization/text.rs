//! Model files: an algebra file whose metadata records `k`, `d`, the family
//! variables and the forms, so the model can be rebuilt and compared.

use crate::cdga::{parse_cdga, write_cdga};
use crate::groups::FormFamily;
use crate::poly::VarSpace;
use crate::realizable::RealizableFamily;
use crate::{QCdga, QPoly};

use super::{build_model, ModelSpec, RealizationError, SullivanModel};

pub fn write_model(model: &SullivanModel) -> String {
    let spec = model.spec();
    let family = spec.family();
    let space = family.space();
    let mut meta = vec![
        ("k".to_string(), spec.k().to_string()),
        ("d".to_string(), spec.d().to_string()),
        ("s".to_string(), family.s().to_string()),
        ("family-vars".to_string(), (0..space.len()).map(|i| space.name(i)).collect::<Vec<_>>().join(" ")),
    ];
    for (i, q) in family.forms().iter().enumerate() {
        meta.push((format!("q{i}"), q.to_string()));
    }
    write_cdga(model.cdga(), &meta)
}

/// A parsed model file. `model` is present when the metadata describes one,
/// and then agrees with `cdga`.
#[derive(Debug, Clone)]
pub struct ModelFile {
    pub cdga: QCdga,
    pub model: Option<SullivanModel>,
}

pub fn parse_model(text: &str) -> Result<ModelFile, RealizationError> {
    let file = parse_cdga(text)?;
    let get = |key: &str| file.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
    let Some(k) = get("k") else {
        return Ok(ModelFile { cdga: file.cdga, model: None });
    };
    let bad = |message: String| RealizationError::Syntax { line: 0, message };
    let k: u64 = k.parse().map_err(|_| bad(format!("bad k `{k}`")))?;
    let vars = get("family-vars").ok_or_else(|| bad("missing `family-vars`".into()))?;
    let space = VarSpace::new(vars.split_whitespace())?;
    let mut forms = Vec::new();
    while let Some(text) = get(&format!("q{}", forms.len())) {
        forms.push(QPoly::parse(text, &space)?);
    }
    let family = FormFamily::new(forms).map_err(|e| bad(format!("family: {e}")))?;
    let family = RealizableFamily::new(family)?;
    if let Some(d) = get("d") {
        if d.parse::<u64>().ok() != Some(family.d()) {
            return Err(bad(format!("d = {d} does not match the family")));
        }
    }
    let model = build_model(ModelSpec::new(family, k)?)?;
    if **model.cdga() != file.cdga {
        return Err(RealizationError::ModelMismatch);
    }
    Ok(ModelFile { cdga: file.cdga, model: Some(model) })
}
