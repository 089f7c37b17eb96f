"""create cached_series

Revision ID: 5c1e7a2b9d40
Revises: 
Create Date: 2026-10-18 11:02:37.412905

"""
from typing import Sequence, Union

from alembic import op
import sqlalchemy as sa


# revision identifiers, used by Alembic.
revision: str = '5c1e7a2b9d40'
down_revision: Union[str, Sequence[str], None] = None
branch_labels: Union[str, Sequence[str], None] = None
depends_on: Union[str, Sequence[str], None] = None


def upgrade() -> None:
    """Upgrade schema."""
    op.create_table('cached_series',
    sa.Column('cache_key', sa.String(length=64), nullable=False),
    sa.Column('scenario_id', sa.String(length=255), nullable=False),
    sa.Column('config_hash', sa.String(length=64), nullable=False),
    sa.Column('library_version', sa.String(length=50), nullable=False),
    sa.Column('checksum', sa.String(length=64), nullable=False),
    sa.Column('payload', sa.Text(), nullable=False),
    sa.Column('id', sa.Integer(), autoincrement=True, nullable=False),
    sa.Column('created_at', sa.DateTime(timezone=True), server_default=sa.text('(CURRENT_TIMESTAMP)'), nullable=False),
    sa.Column('updated_at', sa.DateTime(timezone=True), server_default=sa.text('(CURRENT_TIMESTAMP)'), nullable=False),
    sa.PrimaryKeyConstraint('id')
    )
    op.create_index(op.f('ix_cached_series_cache_key'), 'cached_series', ['cache_key'], unique=True)
    op.create_index(op.f('ix_cached_series_scenario_id'), 'cached_series', ['scenario_id'], unique=False)


def downgrade() -> None:
    """Downgrade schema."""
    op.drop_index(op.f('ix_cached_series_scenario_id'), table_name='cached_series')
    op.drop_index(op.f('ix_cached_series_cache_key'), table_name='cached_series')
    op.drop_table('cached_series')
